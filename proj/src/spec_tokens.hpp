#pragma once

// Shared tokenizer for "family:item,item,key=value" spec strings.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "walkeff/errors.hpp"

namespace walkeff::detail {

struct SpecItem {
  std::string_view key;    // empty for positional items
  std::string_view value;
  std::size_t position = 0;  // offset of value in the original string
};

struct SpecTokens {
  std::string_view family;
  std::vector<SpecItem> items;
  std::size_t end = 0;
};

inline SpecTokens tokenize_spec(std::string_view text) {
  if (text.empty()) throw ParseError("empty spec string", 0);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("expected '<family>:<params>'", text.size());
  SpecTokens out;
  out.family = text.substr(0, colon);
  out.end = text.size();
  if (out.family.empty()) throw ParseError("missing family name", 0);
  std::size_t pos = colon + 1;
  if (pos >= text.size()) throw ParseError("missing parameters", pos);
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    if (item.empty()) throw ParseError("empty parameter", pos);
    SpecItem parsed;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      parsed.value = item;
      parsed.position = pos;
    } else {
      parsed.key = item.substr(0, eq);
      parsed.value = item.substr(eq + 1);
      parsed.position = pos + eq + 1;
      if (parsed.key.empty()) throw ParseError("empty key", pos);
      if (parsed.value.empty()) throw ParseError("empty value", parsed.position);
    }
    out.items.push_back(parsed);
    pos = comma + 1;
  }
  return out;
}

inline double parse_double(const SpecItem& item) {
  double v = 0.0;
  const char* first = item.value.data();
  const char* last = first + item.value.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("expected a real number, got '" + std::string(item.value) + "'", item.position);
  return v;
}

inline std::uint64_t parse_unsigned(const SpecItem& item) {
  std::uint64_t v = 0;
  const char* first = item.value.data();
  const char* last = first + item.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("expected a non-negative integer, got '" + std::string(item.value) + "'",
                     item.position);
  return v;
}

}  // namespace walkeff::detail

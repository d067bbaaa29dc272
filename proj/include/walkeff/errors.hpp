#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace walkeff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, functionality, window...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit (node cap) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or quadrature failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// An operation was called on data that lacks something it requires,
/// e.g. eigenvectors.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed graph/DOS spec string or config file. `position` is the
/// zero-based character offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        message_(what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }
  /// The message without the position suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

}  // namespace walkeff

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "walkeff/scaling.hpp"
#include "walkeff/time_grid.hpp"

namespace walkeff {

inline constexpr std::string_view kVersion = "1.0.0";

struct GridConfig {
  double t_min = 1e-2;
  double t_max = 1e4;
  std::size_t points = 600;
  Spacing spacing = Spacing::kLogarithmic;
  bool include_zero = true;

  TimeGrid build() const;
};

/// Everything needed to reproduce one run. Exactly one of graph / dos is set.
struct ExperimentConfig {
  std::optional<std::string> graph;
  std::optional<std::string> dos;
  GridConfig grid;
  std::size_t envelope_half_width = 3;
  std::optional<FitWindow> classical_fit_window;  // default [1,100] graphs, [10,100] DOS
  std::optional<FitWindow> quantum_fit_window;
  std::optional<FitWindow> envelope_window;       // default: quantum fit window
  double tail_fraction = 0.1;
  std::optional<FitModel> fit_model;  // default: stretched exp for Lifshits DOS, else power law
  bool exact_average = false;  // pi_bar, needs eigenvectors
  bool chi = false;            // chi.csv, needs eigenvectors
  std::uint64_t seed = 0;
  std::size_t max_nodes = 5000;
  std::filesystem::path out_dir;

  FitWindow classical_window() const;
  FitWindow quantum_window() const;

  /// Throws ParseError / InvalidArgument.
  void validate() const;
  /// "key = value" lines, stable order; parse_config_text reads them back.
  std::vector<std::pair<std::string, std::string>> settings() const;
};

/// Sets one named option from its text form. Throws ParseError for unknown
/// keys or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies "key = value" lines ('#' starts a comment) on top of `config`.
void apply_config_text(ExperimentConfig& config, std::string_view text);
ExperimentConfig parse_config_text(std::string_view text);

/// Documented configuration reproducing a figure: fig1a, fig1b, fig2a, fig2b, fig3.
ExperimentConfig preset(std::string_view figure);
std::vector<std::string> preset_names();

struct ManifestEntry {
  std::string file;
  std::uint64_t checksum = 0;  // FNV-1a 64 over the file bytes
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ManifestEntry> files;
  std::string version;
  double duration_seconds = 0.0;
};

enum class RunMode {
  kFull,       // series, spectrum, report, delta P
  kSpectrum,   // spectrum.csv, degeneracies.csv, dos.csv
  kTransport,  // series.csv
};

RunManifest run_experiment(const ExperimentConfig& config, RunMode mode = RunMode::kFull);

/// Analysis of an existing series CSV ("t,p_bar,alpha_bar_sq[,pi_bar]").
/// Writes report.txt, envelope.csv, deltap.csv and manifest.txt to config.out_dir.
RunManifest run_fit(const std::filesystem::path& series_csv, const ExperimentConfig& config);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace walkeff

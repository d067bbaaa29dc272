#include "walkeff/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spec_tokens.hpp"
#include "walkeff/continuum_dos.hpp"
#include "walkeff/csv.hpp"
#include "walkeff/discrete_transport.hpp"
#include "walkeff/errors.hpp"
#include "walkeff/graph.hpp"
#include "walkeff/spectral.hpp"

namespace walkeff {
namespace {

constexpr std::size_t kMaxEnvelopePoints = 200000;
constexpr std::size_t kDosBins = 50;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

detail::SpecItem item_of(std::string_view value) { return detail::SpecItem{{}, value, 0}; }

double to_double(std::string_view value) { return detail::parse_double(item_of(value)); }
std::uint64_t to_unsigned(std::string_view value) { return detail::parse_unsigned(item_of(value)); }

bool to_bool(std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ParseError("expected a boolean, got '" + std::string(value) + "'", 0);
}

FitWindow to_window(std::string_view value) {
  const auto comma = value.find(',');
  if (comma == std::string_view::npos) throw ParseError("expected '<lo>,<hi>'", value.size());
  FitWindow w{detail::parse_double({{}, value.substr(0, comma), 0}),
              detail::parse_double({{}, value.substr(comma + 1), comma + 1})};
  if (!(w.lo < w.hi)) throw ParseError("window needs lo < hi", 0);
  return w;
}

std::string window_text(FitWindow w) { return format_double(w.lo) + "," + format_double(w.hi); }

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw InvalidArgument("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
    writer(out);
    out.close();
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
    files_.push_back(name);
  }

  RunManifest finish(const ExperimentConfig& config, std::chrono::steady_clock::time_point start) {
    RunManifest m;
    m.config = config.settings();
    m.version = std::string(kVersion);
    for (const auto& name : files_) {
      const auto path = dir_ / name;
      m.files.push_back({name, file_checksum(path), std::filesystem::file_size(path)});
    }
    m.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(dir_ / "manifest.txt", std::ios::binary | std::ios::trunc);
    out << "version = " << m.version << '\n';
    out << "duration_seconds = " << format_double(m.duration_seconds) << '\n';
    for (const auto& [k, v] : m.config) out << "config." << k << " = " << v << '\n';
    for (const auto& f : m.files) {
      std::ostringstream hex;
      hex << std::hex << f.checksum;
      out << "file = " << f.file << " fnv1a64=" << hex.str() << " bytes=" << f.bytes << '\n';
    }
    if (!out) throw InvalidArgument("failed writing manifest.txt");
    return m;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

Series to_series(const TimeGrid& grid, const std::vector<double>& values) {
  return Series{std::vector<double>(grid.times().begin(), grid.times().end()), values};
}

Series positive_part(const Series& s) {
  Series out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.t[i] > 0.0) {
      out.t.push_back(s.t[i]);
      out.value.push_back(s.value[i]);
    }
  }
  return out;
}

/// Envelope of the quantum bound. Oscillating series are resampled on a
/// linear grid fine enough for the fastest frequency lambda_max
/// (8 samples per period pi / lambda_max).
template <class QuantumOnGrid>
Series quantum_envelope(const Series& quantum, std::optional<double> lambda_max, FitWindow window,
                        std::size_t half_width, QuantumOnGrid&& evaluate) {
  const auto main = positive_part(quantum);
  if (is_non_oscillatory(main, half_width) || !lambda_max || !(*lambda_max > 0.0)) return main;
  const double step = std::numbers::pi / (8.0 * *lambda_max);
  const auto dense = TimeGrid::resolving(window.lo, window.hi, step, kMaxEnvelopePoints);
  const auto values = evaluate(dense);
  return extract_envelope(to_series(dense, values), half_width).points;
}

void write_envelope_csv(std::ostream& out, const Series& env) {
  out << "t,alpha_bar_sq_envelope\n";
  for (std::size_t i = 0; i < env.size(); ++i) out << format_double(env.t[i]) << ',' << format_double(env.value[i]) << '\n';
}

void write_dos_csv(std::ostream& out, const DosHistogram& h) {
  out << "bin_lo,bin_hi,density\n";
  for (std::size_t k = 0; k < h.density.size(); ++k)
    out << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ',' << format_double(h.density[k]) << '\n';
}

void finish_analysis(OutputSet& out, const ExperimentConfig& config, const Series& classical, const Series& quantum,
                     const Series& envelope, FitModel model,
                     std::vector<std::pair<std::string, std::string>> extra,
                     std::optional<DeltaPSeries> log_delta = std::nullopt) {
  auto report = make_report(classical, quantum, envelope, model, config.classical_window(),
                            config.quantum_window(), config.tail_fraction);
  if (log_delta) {
    report.delta_p = std::move(*log_delta);
    report.crossover = detect_crossover(report.delta_p.values);
  }
  extra.emplace_back("envelope_points", std::to_string(envelope.size()));
  out.write("envelope.csv", [&](std::ostream& os) { write_envelope_csv(os, envelope); });
  out.write("report.txt", [&](std::ostream& os) { write_report(os, report, extra); });
  out.write("deltap.csv", [&](std::ostream& os) { write_delta_p_csv(os, report.delta_p); });
}

RunManifest run_graph(const ExperimentConfig& config, RunMode mode) {
  const auto start = std::chrono::steady_clock::now();
  const auto spec = parse_graph_spec(*config.graph);
  const auto graph = build_graph(spec, config.seed, BuildLimits{config.max_nodes});
  const bool vectors = mode == RunMode::kFull && (config.exact_average || config.chi);
  const auto spectrum = decompose(laplacian(graph), vectors);
  const auto levels = degeneracy_table(spectrum);
  OutputSet out(config.out_dir);

  if (mode == RunMode::kSpectrum) {
    out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, spectrum); });
    out.write("degeneracies.csv", [&](std::ostream& os) { write_degeneracy_csv(os, levels); });
    out.write("dos.csv", [&](std::ostream& os) { write_dos_csv(os, dos_histogram(spectrum, kDosBins)); });
    return out.finish(config, start);
  }

  const auto grid = config.grid.build();
  const auto series = transport_series(spectrum, grid, vectors && config.exact_average);
  out.write("series.csv", [&](std::ostream& os) { write_series_csv(os, series); });
  if (mode == RunMode::kTransport) return out.finish(config, start);

  out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, spectrum); });
  out.write("degeneracies.csv", [&](std::ostream& os) { write_degeneracy_csv(os, levels); });
  if (config.chi) out.write("chi.csv", [&](std::ostream& os) { write_chi_csv(os, chi_matrix(spectrum)); });

  const auto classical = to_series(grid, series.p_bar);
  const auto quantum = to_series(grid, series.alpha_bar_sq);
  const auto envelope_window = config.envelope_window.value_or(config.quantum_window());
  const auto envelope = quantum_envelope(quantum, spectrum.max(), envelope_window, config.envelope_half_width,
                                         [&](const TimeGrid& g) { return quantum_return_bound(spectrum, g); });

  std::vector<std::pair<std::string, std::string>> extra{
      {"source", "graph " + to_string(spec)},
      {"nodes", std::to_string(graph.node_count())},
      {"edges", std::to_string(graph.edge_count())},
      {"components", std::to_string(graph.component_count())},
      {"lambda_max", format_double(spectrum.max())},
      {"distinct_eigenvalues", std::to_string(levels.size())},
      {"classical_equipartition", format_double(static_cast<double>(graph.component_count()) /
                                                  static_cast<double>(graph.node_count()))},
      {"quantum_bound_time_average", format_double(bound_time_average(spectrum, spectrum.default_cluster_tol()))},
  };
  if (series.pi_bar) {
    const auto exact = window_saturation(to_series(grid, *series.pi_bar), grid.back() * (1.0 - config.tail_fraction),
                                         grid.back());
    extra.emplace_back("pi_bar_tail_mean", format_double(exact.mean));
  }
  finish_analysis(out, config, classical, quantum, envelope, config.fit_model.value_or(FitModel::kPowerLaw),
                  std::move(extra));
  return out.finish(config, start);
}

RunManifest run_dos(const ExperimentConfig& config, RunMode mode) {
  const auto start = std::chrono::steady_clock::now();
  if (mode == RunMode::kSpectrum) throw InvalidArgument("the spectrum subcommand needs --graph");
  const auto dos = parse_dos_spec(*config.dos);
  OutputSet out(config.out_dir);
  const auto grid = config.grid.build();
  TransportSeries series{grid, classical_return_continuum(dos, grid), quantum_return_bound_continuum(dos, grid),
                         std::nullopt};
  out.write("series.csv", [&](std::ostream& os) { write_series_csv(os, series); });
  if (mode == RunMode::kTransport) return out.finish(config, start);

  const auto classical = to_series(grid, series.p_bar);
  const auto quantum = to_series(grid, series.alpha_bar_sq);
  const auto envelope_window = config.envelope_window.value_or(config.quantum_window());
  const auto envelope = quantum_envelope(quantum, dos.support_max(), envelope_window, config.envelope_half_width,
                                         [&](const TimeGrid& g) { return quantum_return_bound_continuum(dos, g); });
  const bool lifshits = std::holds_alternative<Lifshits>(dos.shape());
  const auto model = config.fit_model.value_or(lifshits ? FitModel::kStretchedExp : FitModel::kPowerLaw);

  std::vector<std::pair<std::string, std::string>> extra{{"source", "dos " + to_string(dos)}};
  auto law_text = [](const AsymptoticLaw& law) {
    if (const auto* p = std::get_if<PowerLaw>(&law.form)) return "t^" + format_double(p->exponent);
    const auto& s = std::get<StretchedExp>(law.form);
    return "t^" + format_double(s.prefactor_exponent) + " exp(-" + format_double(s.stretch_coefficient) + " t^" +
           format_double(s.stretch_exponent) + ")";
  };
  extra.emplace_back("asymptotic_classical", law_text(asymptotic_law(dos, Walk::kClassical)));
  extra.emplace_back("asymptotic_quantum", law_text(asymptotic_law(dos, Walk::kQuantum)));
  // The envelope of a non-oscillating series is the series itself; its
  // logarithm stays finite where the values underflow.
  std::optional<DeltaPSeries> log_delta;
  if (lifshits && envelope.size() + 1 >= quantum.size()) {
    log_delta = delta_p_from_logs(to_series(grid, log_classical_return_continuum(dos, grid)),
                                  positive_part(to_series(grid, log_quantum_return_bound_continuum(dos, grid))));
  }
  finish_analysis(out, config, classical, quantum, envelope, model, std::move(extra), std::move(log_delta));
  return out.finish(config, start);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

}  // namespace

TimeGrid GridConfig::build() const {
  if (spacing == Spacing::kLinear) {
    auto g = TimeGrid::linear(include_zero ? 0.0 : t_min, t_max, points);
    return g;
  }
  return TimeGrid::logarithmic(t_min, t_max, points, include_zero);
}

FitWindow ExperimentConfig::classical_window() const {
  if (classical_fit_window) return *classical_fit_window;
  return graph ? FitWindow{1.0, 100.0} : FitWindow{10.0, 100.0};
}

FitWindow ExperimentConfig::quantum_window() const {
  if (quantum_fit_window) return *quantum_fit_window;
  return graph ? FitWindow{1.0, 100.0} : FitWindow{10.0, 100.0};
}

void ExperimentConfig::validate() const {
  if (graph.has_value() == dos.has_value()) throw ParseError("exactly one of graph / dos must be given", 0);
  if (graph) parse_graph_spec(*graph);
  if (dos) parse_dos_spec(*dos);
  if (out_dir.empty()) throw ParseError("an output directory is required", 0);
  if (!(tail_fraction > 0.0 && tail_fraction <= 0.5)) throw InvalidArgument("tail_fraction must lie in (0, 0.5]");
  if (envelope_half_width < 1) throw InvalidArgument("envelope_half_width must be >= 1");
  grid.build();
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::settings() const {
  std::vector<std::pair<std::string, std::string>> s;
  if (graph) s.emplace_back("graph", *graph);
  if (dos) s.emplace_back("dos", *dos);
  s.emplace_back("t_min", format_double(grid.t_min));
  s.emplace_back("t_max", format_double(grid.t_max));
  s.emplace_back("points", std::to_string(grid.points));
  s.emplace_back("spacing", grid.spacing == Spacing::kLinear ? "linear" : "log");
  s.emplace_back("include_zero", grid.include_zero ? "true" : "false");
  s.emplace_back("envelope_half_width", std::to_string(envelope_half_width));
  s.emplace_back("classical_fit_window", window_text(classical_window()));
  s.emplace_back("quantum_fit_window", window_text(quantum_window()));
  s.emplace_back("envelope_window", window_text(envelope_window.value_or(quantum_window())));
  s.emplace_back("tail_fraction", format_double(tail_fraction));
  if (fit_model) s.emplace_back("fit_model", *fit_model == FitModel::kPowerLaw ? "power_law" : "stretched_exp");
  s.emplace_back("exact_average", exact_average ? "true" : "false");
  s.emplace_back("chi", chi ? "true" : "false");
  s.emplace_back("seed", std::to_string(seed));
  s.emplace_back("max_nodes", std::to_string(max_nodes));
  s.emplace_back("out", out_dir.string());
  return s;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "graph") {
    parse_graph_spec(value);
    c.graph = value;
    c.dos.reset();
  } else if (key == "dos") {
    parse_dos_spec(value);
    c.dos = value;
    c.graph.reset();
  } else if (key == "t_min") {
    c.grid.t_min = to_double(value);
  } else if (key == "t_max") {
    c.grid.t_max = to_double(value);
  } else if (key == "points") {
    c.grid.points = to_unsigned(value);
  } else if (key == "spacing") {
    if (value == "log") c.grid.spacing = Spacing::kLogarithmic;
    else if (value == "linear") c.grid.spacing = Spacing::kLinear;
    else throw ParseError("spacing must be 'log' or 'linear'", 0);
  } else if (key == "include_zero") {
    c.grid.include_zero = to_bool(value);
  } else if (key == "envelope_half_width") {
    c.envelope_half_width = to_unsigned(value);
  } else if (key == "fit_window") {
    c.classical_fit_window = c.quantum_fit_window = to_window(value);
  } else if (key == "classical_fit_window") {
    c.classical_fit_window = to_window(value);
  } else if (key == "quantum_fit_window") {
    c.quantum_fit_window = to_window(value);
  } else if (key == "envelope_window") {
    c.envelope_window = to_window(value);
  } else if (key == "tail_fraction") {
    c.tail_fraction = to_double(value);
  } else if (key == "fit_model") {
    if (value == "power_law") c.fit_model = FitModel::kPowerLaw;
    else if (value == "stretched_exp") c.fit_model = FitModel::kStretchedExp;
    else if (value == "auto") c.fit_model.reset();
    else throw ParseError("fit_model must be power_law, stretched_exp or auto", 0);
  } else if (key == "exact_average") {
    c.exact_average = to_bool(value);
  } else if (key == "chi") {
    c.chi = to_bool(value);
  } else if (key == "seed") {
    c.seed = to_unsigned(value);
  } else if (key == "max_nodes") {
    c.max_nodes = to_unsigned(value);
  } else if (key == "out") {
    c.out_dir = value;
  } else {
    throw ParseError("unknown setting '" + std::string(key) + "'", 0);
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t offset = 0;
  while (offset <= text.size()) {
    auto end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", offset);
      const auto value = line.substr(eq + 1);
      const auto lead = std::min(value.find_first_not_of(" \t"), value.size());
      const std::size_t base = offset + eq + 1 + lead;
      try {
        apply_setting(config, trim(line.substr(0, eq)), value);
      } catch (const ParseError& e) {
        throw ParseError(e.message(), base + e.position());
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), base);
      }
    }
    offset = end + 1;
  }
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig c;
  apply_config_text(c, text);
  return c;
}

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3"}; }

ExperimentConfig preset(std::string_view figure) {
  ExperimentConfig c;
  if (figure == "fig1a") {
    // infinite 1D lattice: DOS 1/(pi sqrt(lambda (4 - lambda)))
    c.dos = "semicircle:nu=-0.5,lmax=4";
  } else if (figure == "fig1b") {
    c.dos = "semicircle:nu=0.5,lmax=4";
  } else if (figure == "fig2a") {
    c.graph = "ring:200";
  } else if (figure == "fig2b") {
    c.graph = "dendrimer:10,3";
  } else if (figure == "fig3") {
    c.graph = "star:10";
    c.exact_average = true;
  } else {
    throw InvalidArgument("unknown figure preset '" + std::string(figure) + "'");
  }
  return c;
}

RunManifest run_experiment(const ExperimentConfig& config, RunMode mode) {
  config.validate();
  return config.graph ? run_graph(config, mode) : run_dos(config, mode);
}

RunManifest run_fit(const std::filesystem::path& series_csv, const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(series_csv);
  if (!in) throw InvalidArgument("cannot read '" + series_csv.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty series file", 0);
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ParseError("series file lacks column '" + std::string(name) + "'", 0);
  };
  const auto ct = column("t");
  const auto cp = column("p_bar");
  const auto ca = column("alpha_bar_sq");
  Series classical;
  Series quantum;
  std::size_t offset = line.size() + 1;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError("wrong number of columns", offset);
    const double t = to_double(cells[ct]);
    classical.t.push_back(t);
    quantum.t.push_back(t);
    classical.value.push_back(to_double(cells[cp]));
    quantum.value.push_back(to_double(cells[ca]));
    offset += line.size() + 1;
  }
  validate(classical);
  if (config.out_dir.empty()) throw ParseError("an output directory is required", 0);
  OutputSet out(config.out_dir);
  const auto main = positive_part(quantum);
  const auto envelope = is_non_oscillatory(main, config.envelope_half_width)
                            ? main
                            : extract_envelope(main, config.envelope_half_width).points;
  const auto model = config.fit_model.value_or(FitModel::kPowerLaw);
  finish_analysis(out, config, classical, quantum, envelope, model, {{"source", "file " + series_csv.string()}});
  return out.finish(config, start);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

}  // namespace walkeff

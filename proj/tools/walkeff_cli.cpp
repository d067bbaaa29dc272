#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "walkeff/errors.hpp"
#include "walkeff/experiment.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Options {
  std::string config_file;
  std::string out_dir;
  std::string graph;
  std::string dos;
  std::string input;
  std::string figure;
  Overrides settings;
};

// Every tunable is exposed as --<key with dashes>; values are applied in
// command-line order after the config file.
void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out,-o", opt.out_dir, "output directory");
  cmd->add_option("--graph", opt.graph, "ring:N | star:N | dendrimer:G,z | torus:side,d | er:n,p[,seed=s]");
  cmd->add_option("--dos", opt.dos, "semicircle:nu=..,lmax=.. | lifshits:b=..");
  const std::vector<std::pair<std::string, std::string>> keys{
      {"t_min", "first non-zero time"},
      {"t_max", "last time"},
      {"points", "number of grid points"},
      {"spacing", "log | linear"},
      {"include_zero", "prepend t = 0"},
      {"envelope_half_width", "neighbours on each side of an envelope maximum"},
      {"fit_window", "lo,hi for both fits"},
      {"classical_fit_window", "lo,hi"},
      {"quantum_fit_window", "lo,hi"},
      {"envelope_window", "lo,hi"},
      {"tail_fraction", "fraction of the series used for saturation"},
      {"fit_model", "power_law | stretched_exp | auto"},
      {"exact_average", "also compute pi_bar (true/false)"},
      {"chi", "write chi.csv (true/false)"},
      {"seed", "random seed"},
      {"max_nodes", "largest accepted graph"},
  };
  for (const auto& [key, help] : keys) {
    std::string flag = "--" + key;
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    cmd->add_option_function<std::string>(
        flag, [&opt, key = key](const std::string& v) { opt.settings.emplace_back(key, v); }, help);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw walkeff::InvalidArgument("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

walkeff::ExperimentConfig assemble(const Options& opt, walkeff::ExperimentConfig base) {
  if (!opt.config_file.empty()) walkeff::apply_config_text(base, read_file(opt.config_file));
  if (!opt.graph.empty()) walkeff::apply_setting(base, "graph", opt.graph);
  if (!opt.dos.empty()) walkeff::apply_setting(base, "dos", opt.dos);
  if (!opt.graph.empty() && !opt.dos.empty()) throw walkeff::ParseError("give either --graph or --dos, not both", 0);
  for (const auto& [k, v] : opt.settings) walkeff::apply_setting(base, k, v);
  if (!opt.out_dir.empty()) base.out_dir = opt.out_dir;
  return base;
}

void print_manifest(const walkeff::RunManifest& m, const walkeff::ExperimentConfig& c) {
  std::cout << "wrote " << m.files.size() + 1 << " files to " << c.out_dir.string() << " in " << m.duration_seconds
            << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum transport efficiency on graphs and model spectra"};
  app.set_version_flag("--version", std::string(walkeff::kVersion));
  app.require_subcommand(1);

  Options opt;
  auto* run = app.add_subcommand("run", "full pipeline: series, spectrum, fits, report");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, degeneracies and DOS histogram of a graph");
  auto* transport = app.add_subcommand("transport", "return probability series only");
  auto* fit = app.add_subcommand("fit", "fit and report on an existing series.csv");
  auto* fig = app.add_subcommand("preset", "run a stored figure configuration");
  for (auto* cmd : {run, spectrum, transport, fit, fig}) add_common(cmd, opt);
  fit->add_option("--input,-i", opt.input, "series CSV")->required()->check(CLI::ExistingFile);
  fig->add_option("figure", opt.figure, "preset name")->required()->check(CLI::IsMember(walkeff::preset_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    walkeff::ExperimentConfig base;
    if (fig->parsed()) base = walkeff::preset(opt.figure);
    const auto config = assemble(opt, base);
    walkeff::RunManifest manifest;
    if (fit->parsed()) {
      manifest = walkeff::run_fit(opt.input, config);
    } else {
      auto mode = walkeff::RunMode::kFull;
      if (spectrum->parsed()) mode = walkeff::RunMode::kSpectrum;
      if (transport->parsed()) mode = walkeff::RunMode::kTransport;
      manifest = walkeff::run_experiment(config, mode);
    }
    print_manifest(manifest, config);
  } catch (const walkeff::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const walkeff::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const walkeff::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const walkeff::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "abvr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "abvr/errors.hpp"
#include "abvr/io.hpp"
#include "abvr/rng.hpp"

namespace abvr {
namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<double> alpha;
  std::vector<std::string> methods;
  std::optional<std::string> framework;
  std::optional<std::uint64_t> seed;
  std::string output_path;
  std::optional<std::string> format;
  std::optional<std::string> hc;
  bool wall_clock = false;
};

struct SimFlags {
  std::optional<std::size_t> reps;
  unsigned threads = 0;
  std::string n_grid;
};

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("AB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string_view s(raw);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("AB_SEED must be a non-negative integer, got '" + std::string(s) +
                                "'");
  }
  return v;
}

// file < AB_SEED < --seed
std::uint64_t resolve_seed(std::uint64_t from_file, const CommonFlags& flags) {
  if (flags.seed) return *flags.seed;
  if (const auto e = env_seed()) return *e;
  return from_file;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw std::invalid_argument("--n-grid: cannot parse '" + item + "'");
    }
    grid.push_back(v);
  }
  return grid;
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ParseError("failed writing '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

int cmd_analyze(const CommonFlags& flags, const std::string& input, std::ostream& out) {
  AnalysisConfig cfg;
  std::uint64_t file_seed = 0;
  if (!flags.config_path.empty()) {
    nlohmann::json j = read_json_file(flags.config_path);
    if (j.is_object() && j.contains("seed")) {
      file_seed = j.at("seed").get<std::uint64_t>();
      j.erase("seed");
    }
    merge_analysis_config(cfg, j);
  }
  if (!input.empty()) cfg.input_path = input;
  if (flags.alpha) cfg.alpha = *flags.alpha;
  if (!flags.methods.empty()) cfg.methods = flags.methods;
  if (flags.framework) {
    nlohmann::json fj{{"framework", *flags.framework}};
    merge_analysis_config(cfg, fj);
  }
  if (flags.hc) cfg.hc = hc_variant_from_string(*flags.hc);
  if (flags.format) cfg.output_format = output_format_from_string(*flags.format);
  cfg.check();
  if (cfg.input_path.empty()) throw std::invalid_argument("analyze needs --input");

  const ExperimentData data = read_experiment_csv(cfg.input_path);
  const auto rows = compare_methods(data, cfg.compare_options());

  RunManifest manifest;
  manifest.seed = resolve_seed(file_seed, flags);
  manifest.tool_version = tool_version();
  manifest.config_echo = cfg.to_json();
  manifest.timestamp = manifest_timestamp(flags.wall_clock);

  std::ostringstream buf;
  write_analysis_report(buf, manifest, rows, cfg.output_format);
  emit(flags.output_path, out, buf.str());

  const bool all_failed =
      std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return !r.result; });
  return all_failed ? kExitAllFailed : kExitOk;
}

Scenario load_scenario(const CommonFlags& flags, const SimFlags& sim) {
  if (flags.config_path.empty()) throw std::invalid_argument("--config <scenario.json> is required");
  Scenario s = read_scenario(flags.config_path);
  s.options.seed = resolve_seed(s.options.seed, flags);
  if (sim.reps) {
    if (*sim.reps < 1) throw std::invalid_argument("--reps must be at least 1");
    s.options.reps = *sim.reps;
  }
  if (flags.alpha) {
    if (!(*flags.alpha > 0.0 && *flags.alpha < 1.0)) {
      throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    s.options.alpha = *flags.alpha;
  }
  if (!flags.methods.empty()) {
    s.options.methods.clear();
    for (const auto& m : flags.methods) s.options.methods.push_back(estimator_from_string(m));
  }
  if (flags.hc) s.options.hc = hc_variant_from_string(*flags.hc);
  s.options.threads = sim.threads;
  if (!sim.n_grid.empty()) s.n_grid = parse_grid(sim.n_grid);
  return s;
}

std::uint64_t config_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

RunManifest scenario_manifest(const Scenario& s, const CommonFlags& flags, nlohmann::json echo) {
  RunManifest m;
  m.seed = s.options.seed;
  m.tool_version = tool_version();
  m.config_echo = std::move(echo);
  m.timestamp = manifest_timestamp(flags.wall_clock);
  return m;
}

int cmd_simulate(const CommonFlags& flags, const SimFlags& sim, std::ostream& out) {
  const Scenario s = load_scenario(flags, sim);
  const OutputFormat format = output_format_from_string(flags.format.value_or("csv"));
  std::optional<Framework> forced;
  if (flags.framework && *flags.framework != "both") {
    if (*flags.framework == "design") forced = Framework::DesignBased;
    else if (*flags.framework == "model") forced = Framework::ModelBased;
    else throw std::invalid_argument("framework must be design, model or both");
  }

  std::optional<SourceTable> source;
  std::vector<SimulationRow> rows;
  for (std::size_t i = 0; i < s.configurations.size(); ++i) {
    const ScenarioConfiguration& c = s.configurations[i];
    SimOptions opts = s.options;
    opts.seed = config_seed(s.options.seed, i);
    std::vector<ReplicationDraw> draws;
    Framework primary = Framework::ModelBased;
    switch (c.framework) {
      case SimFramework::Finite:
        draws = replicate_finite(c.dgp, opts);
        primary = Framework::DesignBased;
        break;
      case SimFramework::Infinite:
        draws = replicate_infinite(c.dgp, opts);
        break;
      case SimFramework::Bootstrap:
        if (!source) {
          source = s.source.csv.empty() ? generate_pseudo_real(s.source.size, s.source.seed)
                                        : read_source_csv(s.source.csv);
        }
        draws = replicate_bootstrap(*source, c.bootstrap, opts);
        break;
    }
    for (const SimResult& r : aggregate(draws, opts, forced.value_or(primary))) {
      rows.push_back(SimulationRow{s.name, i, c, r});
    }
  }

  nlohmann::json echo = s.to_json();
  if (flags.framework) echo["framework"] = *flags.framework;
  std::ostringstream buf;
  write_simulation_results(buf, scenario_manifest(s, flags, echo), rows, format);
  emit(flags.output_path, out, buf.str());
  return kExitOk;
}

int cmd_convergence(const CommonFlags& flags, const SimFlags& sim, std::ostream& out) {
  const Scenario s = load_scenario(flags, sim);
  const OutputFormat format = output_format_from_string(flags.format.value_or("csv"));
  if (s.n_grid.empty()) throw std::invalid_argument("convergence needs n_grid or --n-grid");
  std::vector<ConvergenceOutputRow> rows;
  for (std::size_t i = 0; i < s.configurations.size(); ++i) {
    const ScenarioConfiguration& c = s.configurations[i];
    if (c.framework == SimFramework::Bootstrap) {
      throw std::invalid_argument("convergence supports finite and infinite configurations only");
    }
    SimOptions opts = s.options;
    opts.seed = config_seed(s.options.seed, i);
    for (const ConvergenceRow& r : convergence_scan(c.dgp, s.n_grid, opts, c.framework)) {
      rows.push_back(ConvergenceOutputRow{i, c, r});
    }
  }
  std::ostringstream buf;
  write_convergence(buf, scenario_manifest(s, flags, s.to_json()), rows, format);
  emit(flags.output_path, out, buf.str());
  return kExitOk;
}

void add_common(CLI::App& cmd, CommonFlags& f, bool config_required) {
  auto* config = cmd.add_option("--config", f.config_path,
                                config_required ? "Scenario JSON file" : "Analysis config JSON file");
  if (config_required) config->required();
  cmd.add_option("--alpha", f.alpha, "Significance level");
  cmd.add_option("--method", f.methods, "Estimator (repeatable): delta0..delta3, sr, ar, ir");
  cmd.add_option("--framework", f.framework, "Variance framework: design, model or both")
      ->check(CLI::IsMember({"design", "model", "both"}));
  cmd.add_option("--seed", f.seed, "Master seed (overrides AB_SEED and the config file)");
  cmd.add_option("--output", f.output_path, "Output file (default: stdout)");
  cmd.add_option("--format", f.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--hc", f.hc, "Sandwich variant: HC0, HC1, HC2 or HC3");
  cmd.add_flag("--timestamp", f.wall_clock, "Stamp outputs with the current UTC time");
}

void add_sim(CLI::App& cmd, SimFlags& f) {
  cmd.add_option("--reps", f.reps, "Monte Carlo replications per configuration");
  cmd.add_option("--threads", f.threads, "Worker threads (0 = all cores; results unchanged)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance-reduced treatment effect estimation for A/B tests", "abvr"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  CommonFlags analyze_flags, simulate_flags, convergence_flags;
  SimFlags simulate_sim, convergence_sim;
  std::string input;

  auto* analyze = app.add_subcommand("analyze", "Compare all estimators on one experiment CSV");
  add_common(*analyze, analyze_flags, false);
  analyze->add_option("--input", input, "Experiment CSV with columns t, y, x");

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  add_common(*simulate, simulate_flags, true);
  add_sim(*simulate, simulate_sim);

  auto* convergence = app.add_subcommand("convergence", "Emit convergence and variance plot data");
  add_common(*convergence, convergence_flags, true);
  add_sim(*convergence, convergence_sim);
  convergence->add_option("--n-grid", convergence_sim.n_grid, "Comma-separated sample sizes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun 'abvr --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(analyze_flags, input, out);
    if (simulate->parsed()) return cmd_simulate(simulate_flags, simulate_sim, out);
    return cmd_convergence(convergence_flags, convergence_sim, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace abvr

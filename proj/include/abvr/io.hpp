#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abvr/data.hpp"
#include "abvr/inference.hpp"
#include "abvr/simulation.hpp"

namespace abvr {

enum class OutputFormat { Csv, Json };

[[nodiscard]] OutputFormat output_format_from_string(std::string_view name);

/// Round-trip-safe text for a double (17 significant digits).
[[nodiscard]] std::string format_real(double value);

// ---------------------------------------------------------------------------
// Input

/// Reads a header-led CSV with required columns t (0/1), y and x in any order
/// and an optional unit_id. Extra columns are ignored. Throws ParseError with
/// the 1-based line number; validation errors propagate unchanged.
[[nodiscard]] ExperimentData read_experiment_csv(std::istream& in);
[[nodiscard]] ExperimentData read_experiment_csv(const std::filesystem::path& path);

/// Reads the y and x columns of a CSV (t ignored if present) as a
/// superpopulation source table.
[[nodiscard]] SourceTable read_source_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Configuration

enum class FrameworkSelection { Design, Model, Both };

struct AnalysisConfig {
  double alpha = 0.05;
  /// estimator names: delta0..delta3, sr, ar, ir
  std::vector<std::string> methods{"delta0", "delta1", "delta2", "delta3", "sr", "ar", "ir"};
  FrameworkSelection framework = FrameworkSelection::Both;
  HcVariant hc = HcVariant::HC0;
  std::filesystem::path input_path;
  OutputFormat output_format = OutputFormat::Csv;

  void check() const;
  [[nodiscard]] CompareOptions compare_options() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Applies the keys present in `j` on top of `cfg`.
void merge_analysis_config(AnalysisConfig& cfg, const nlohmann::json& j);

/// One row of a simulation scenario.
struct ScenarioConfiguration {
  SimFramework framework = SimFramework::Finite;
  DgpConfig dgp;
  /// bootstrap only
  BootstrapConfig bootstrap;
};

struct SourceSpec {
  std::size_t size = 200000;
  std::uint64_t seed = 7;
  std::filesystem::path csv;  // read instead of generating when non-empty
};

struct Scenario {
  std::string name = "scenario";
  SimOptions options;
  std::vector<ScenarioConfiguration> configurations;
  std::vector<std::size_t> n_grid;
  SourceSpec source;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Parses a scenario document. Throws ParseError on schema violations.
[[nodiscard]] Scenario parse_scenario(const nlohmann::json& j);
[[nodiscard]] Scenario read_scenario(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Output

struct RunManifest {
  std::uint64_t seed = 0;
  std::string tool_version;
  nlohmann::json config_echo;
  std::string timestamp;

  [[nodiscard]] nlohmann::json to_json() const;
};

[[nodiscard]] std::string tool_version();

/// SOURCE_DATE_EPOCH as ISO-8601 UTC when set, the current UTC time when
/// `wall_clock` is true, otherwise "unset".
[[nodiscard]] std::string manifest_timestamp(bool wall_clock);

void write_analysis_report(std::ostream& out, const RunManifest& manifest,
                           const std::vector<ComparisonRow>& rows, OutputFormat format);

struct SimulationRow {
  std::string scenario;
  std::size_t config_index = 0;
  ScenarioConfiguration configuration;
  SimResult result;
};

void write_simulation_results(std::ostream& out, const RunManifest& manifest,
                              const std::vector<SimulationRow>& rows, OutputFormat format);

struct ConvergenceOutputRow {
  std::size_t config_index = 0;
  ScenarioConfiguration configuration;
  ConvergenceRow row;
};

void write_convergence(std::ostream& out, const RunManifest& manifest,
                       const std::vector<ConvergenceOutputRow>& rows, OutputFormat format);

/// Parsed analysis report, used to check that written numbers round-trip.
struct ReportRecord {
  std::string estimator;
  std::string variance;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p_value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

[[nodiscard]] std::vector<ReportRecord> read_analysis_report_csv(std::istream& in);

}  // namespace abvr

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abvr/control_variates.hpp"
#include "abvr/data.hpp"
#include "abvr/inference.hpp"
#include "abvr/regression.hpp"
#include "abvr/rng.hpp"

namespace abvr {

// ---------------------------------------------------------------------------
// Estimators compared in every simulation.

enum class Estimator { Delta0, Delta1, Delta2, Delta3, SR, AR, IR };

[[nodiscard]] std::string_view to_string(Estimator e);
[[nodiscard]] Estimator estimator_from_string(std::string_view name);
[[nodiscard]] const std::vector<Estimator>& all_estimators();

struct EstimatorOutput {
  double estimate = 0.0;
  double var_design = 0.0;
  /// superpopulation variance: design variance plus the slope-gap correction
  double var_model = 0.0;
  bool ok = false;
};

/// Evaluates the requested estimators on one dataset. An estimator that hits
/// DegenerateCovariate or RankDeficient is returned with ok == false.
[[nodiscard]] std::vector<EstimatorOutput> evaluate(const ExperimentData& data,
                                                    std::span<const Estimator> estimators,
                                                    HcVariant hc = HcVariant::HC0);

// ---------------------------------------------------------------------------
// Data-generating process
//   X   ~ N(0, x_var)
//   Y_t = intercept + ate + (1 + hte) X + e_t
//   Y_c = intercept + X + e_c,      e_t, e_c ~ N(0, noise_var) independent

struct DgpConfig {
  std::size_t n = 3000;
  double p_t = 0.5;
  double ate = 0.0;
  double hte = 0.0;
  double x_var = 2.0;
  double noise_var = 1.0;
  double intercept = 1.0;
};

/// round(p_t * n)
[[nodiscard]] std::size_t treated_count(std::size_t n, double p_t);

/// Throws InfeasibleAllocation if either arm would get fewer than 2 units and
/// std::invalid_argument for non-positive variances or p_t outside (0, 1).
void check_config(const DgpConfig& cfg);

/// Both potential outcomes for every unit; only available in simulation.
struct PopulationTable {
  std::vector<double> y_t;
  std::vector<double> y_c;
  std::vector<double> x;

  [[nodiscard]] std::size_t n() const noexcept { return x.size(); }
};

[[nodiscard]] PopulationTable generate_population(const DgpConfig& cfg, std::uint64_t seed);
[[nodiscard]] PopulationTable generate_population(const DgpConfig& cfg, Engine& engine);

/// Treats exactly round(p_t * n) units chosen uniformly without replacement
/// and reveals the matching potential outcome.
[[nodiscard]] ExperimentData assign(const PopulationTable& pop, double p_t, std::uint64_t seed);
[[nodiscard]] ExperimentData assign(const PopulationTable& pop, double p_t, Engine& engine);

/// Finite-population quantities of the transformed outcomes
/// W(theta) = Y - theta (X - mean(X)), all with (n - 1) divisors.
struct PopulationQuantities {
  double delta_s = 0.0;
  double mean_wt = 0.0;
  double mean_wc = 0.0;
  double s2_t = 0.0;
  double s2_c = 0.0;
  double s2_delta = 0.0;
};

[[nodiscard]] PopulationQuantities population_quantities(const PopulationTable& pop, double theta);

// ---------------------------------------------------------------------------
// Replication engine

enum class SimFramework { Finite, Infinite, Bootstrap };

[[nodiscard]] std::string_view to_string(SimFramework f);
[[nodiscard]] SimFramework sim_framework_from_string(std::string_view name);

struct SimOptions {
  std::size_t reps = 1000;
  std::vector<Estimator> methods = all_estimators();
  double alpha = 0.05;
  std::uint64_t seed = 20240601;
  HcVariant hc = HcVariant::HC0;
  /// 0 = hardware concurrency; never changes results
  unsigned threads = 0;
};

/// Raw per-replication output, indexed like SimOptions::methods.
struct ReplicationDraw {
  std::vector<EstimatorOutput> outputs;
  /// ATE that the interval should cover in this replication
  double target = 0.0;
  std::size_t n = 0;
};

struct SimResult {
  Estimator method = Estimator::Delta0;
  /// variance that drives rejection_rate / coverage / mean_var_estimate
  Framework framework = Framework::DesignBased;
  double rejection_rate = 0.0;
  double coverage = 0.0;
  double mean_estimate = 0.0;
  /// variance of the estimates across replications ((reps - 1) divisor)
  double empirical_variance = 0.0;
  double mean_var_estimate = 0.0;

  double rejection_rate_design = 0.0;
  double rejection_rate_model = 0.0;
  double coverage_design = 0.0;
  double coverage_model = 0.0;
  double mean_var_design = 0.0;
  double mean_var_model = 0.0;

  /// replications where the estimator succeeded
  std::size_t reps = 0;
  /// replications excluded because the estimator failed
  std::size_t failed = 0;
  std::uint64_t seed = 0;
};

/// Finite framework: one population drawn from the seed, a fresh assignment
/// per replication, coverage measured against that population's ATE.
[[nodiscard]] std::vector<ReplicationDraw> replicate_finite(const DgpConfig& cfg,
                                                            const SimOptions& options);
/// Infinite framework: fresh population and assignment per replication,
/// coverage against cfg.ate.
[[nodiscard]] std::vector<ReplicationDraw> replicate_infinite(const DgpConfig& cfg,
                                                              const SimOptions& options);

[[nodiscard]] std::vector<SimResult> aggregate(std::span<const ReplicationDraw> draws,
                                               const SimOptions& options, Framework primary);

/// Rates use the design-based variance by default.
[[nodiscard]] std::vector<SimResult> run_finite(const DgpConfig& cfg, const SimOptions& options);
/// Rates use the model-based (corrected) variance by default.
[[nodiscard]] std::vector<SimResult> run_infinite(const DgpConfig& cfg, const SimOptions& options);

// ---------------------------------------------------------------------------
// Convergence scan and variance box-plot data

struct ConvergenceRow {
  std::string series;  // "discrepancy" or "scaled_variance"
  std::size_t n = 0;
  Estimator method = Estimator::Delta0;
  double quantile = 0.0;
  double value = 0.0;
};

/// For each n: quartiles (plus min and max) of sqrt(n) (estimate - delta3)
/// and of n * var_hat, per estimator. delta3 is the baseline and omitted
/// from the discrepancy series.
[[nodiscard]] std::vector<ConvergenceRow> convergence_scan(const DgpConfig& cfg,
                                                           std::span<const std::size_t> n_grid,
                                                           const SimOptions& options,
                                                           SimFramework framework =
                                                               SimFramework::Finite);

inline constexpr double kScanQuantiles[] = {0.0, 0.25, 0.5, 0.75, 1.0};

/// Linear-interpolation sample quantile (R type 7). Reorders `values`.
[[nodiscard]] double sample_quantile(std::span<double> values, double q);

// ---------------------------------------------------------------------------
// Superpopulation resampling

/// Observed (y, x) rows treated as a superpopulation.
struct SourceTable {
  std::vector<double> y;
  std::vector<double> x;

  [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

/// Synthetic stand-in for a production metric table: right-skewed log-normal
/// pre-period covariate and a heteroskedastic linear outcome.
[[nodiscard]] SourceTable generate_pseudo_real(std::size_t size, std::uint64_t seed);

struct BootstrapConfig {
  std::size_t m = 2000;
  double p_t = 0.5;
  double ate = 0.0;
  /// extra slope on (X - source mean of X) for treated units
  double hte = 0.0;
};

/// Per replication: draw m rows with replacement, assign, add
/// ate + hte (X - mean_source(X)) to treated outcomes, estimate. The injected
/// ate is the superpopulation effect and the coverage target.
[[nodiscard]] std::vector<ReplicationDraw> replicate_bootstrap(const SourceTable& source,
                                                               const BootstrapConfig& cfg,
                                                               const SimOptions& options);
[[nodiscard]] std::vector<SimResult> bootstrap_superpopulation(const SourceTable& source,
                                                               const BootstrapConfig& cfg,
                                                               const SimOptions& options);

}  // namespace abvr

#pragma once

#include <string_view>
#include <utility>

#include "abvr/data.hpp"

namespace abvr {

/// How the control-variate coefficient is estimated.
///   None0           theta = 0 (difference in means)
///   Shared1         full-sample cov(Y, X) / var(X), shared by both groups
///   Pooled2         within-group covariances of the group means, pooled
///   GroupSpecific3  separate cov/var ratio in each group
enum class ThetaMethod { None0, Shared1, Pooled2, GroupSpecific3 };

[[nodiscard]] std::string_view to_string(ThetaMethod method);
[[nodiscard]] ThetaMethod theta_method_from_string(std::string_view name);

struct ThetaEstimate {
  double theta_t = 0.0;
  double theta_c = 0.0;
  ThetaMethod method = ThetaMethod::None0;
};

struct AteResult {
  double delta = 0.0;
  double var_design = 0.0;
  /// var_design + correction
  double var_model = 0.0;
  double correction = 0.0;
  ThetaMethod method = ThetaMethod::None0;
  ThetaEstimate theta;
};

/// Throws DegenerateCovariate when the covariate variance used as denominator
/// falls below 1e-12 * max(var(Y), 1).
[[nodiscard]] ThetaEstimate estimate_theta(const ExperimentData& data, ThetaMethod method);
[[nodiscard]] ThetaEstimate estimate_theta(const SummaryBundle& s, ThetaMethod method);

/// [mean(Y_t) - theta_t (mean(X_t) - mean(X))] - [mean(Y_c) - theta_c (mean(X_c) - mean(X))]
[[nodiscard]] double estimate_delta(const ExperimentData& data, const ThetaEstimate& theta);
[[nodiscard]] double estimate_delta(const SummaryBundle& s, const ThetaEstimate& theta);

/// Plug-in variance treating theta as fixed:
///   sum_g (var(Y_g) - 2 theta_g cov_g + theta_g^2 var(X_g)) / n_g
[[nodiscard]] double variance_design(const ExperimentData& data, const ThetaEstimate& theta);
[[nodiscard]] double variance_design(const SummaryBundle& s, const ThetaEstimate& theta);

struct ModelVariance {
  double var_model = 0.0;
  double correction = 0.0;
};

/// Adds (theta_t - theta_c)^2 var(X) / n, the superpopulation term that the
/// design-based formula misses when the coefficients differ by group.
[[nodiscard]] ModelVariance variance_model(const ExperimentData& data, const ThetaEstimate& theta);
[[nodiscard]] ModelVariance variance_model(const SummaryBundle& s, const ThetaEstimate& theta);

[[nodiscard]] AteResult analyze(const ExperimentData& data, ThetaMethod method);
[[nodiscard]] AteResult analyze(const SummaryBundle& s, ThetaMethod method);

// ---------------------------------------------------------------------------
// Large-sample limits under an i.i.d. superpopulation.

struct AsymptoticParams {
  double p_t = 0.5;
  double theta_t = 0.0;
  double theta_c = 0.0;
  double var_yt = 0.0;
  double var_yc = 0.0;
  double var_x = 0.0;
};

/// Probability limits of (theta_t_hat, theta_c_hat).
[[nodiscard]] std::pair<double, double> plim_theta(const AsymptoticParams& params,
                                                   ThetaMethod method);

struct ScaledVarianceLimits {
  /// limit of n * var(delta_hat)
  double n_var_true = 0.0;
  /// limit of n * var_hat(delta_hat), design formula without correction
  double n_var_hat = 0.0;
};

[[nodiscard]] ScaledVarianceLimits plim_variances(const AsymptoticParams& params,
                                                  ThetaMethod method);

/// Throws std::invalid_argument unless 0 < p_t < 1 and the variances are >= 0.
void check_params(const AsymptoticParams& params);

}  // namespace abvr

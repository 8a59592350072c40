#pragma once

#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "abvr/data.hpp"

namespace abvr {

/// SR: [1, T]; AR: [1, T, X - mean(X)]; IR: [1, T, X - mean(X), T (X - mean(X))].
enum class DesignSpec { SR, AR, IR };

/// Heteroskedasticity-consistent weighting of the squared residuals.
enum class HcVariant { HC0, HC1, HC2, HC3 };

[[nodiscard]] std::string_view to_string(DesignSpec spec);
[[nodiscard]] DesignSpec design_spec_from_string(std::string_view name);
[[nodiscard]] std::string_view to_string(HcVariant variant);
[[nodiscard]] HcVariant hc_variant_from_string(std::string_view name);

[[nodiscard]] constexpr Eigen::Index column_count(DesignSpec spec) {
  switch (spec) {
    case DesignSpec::SR: return 2;
    case DesignSpec::AR: return 3;
    case DesignSpec::IR: return 4;
  }
  return 0;
}

/// Column index of the treatment coefficient in every specification.
inline constexpr Eigen::Index kTreatmentColumn = 1;

struct RegressionFit {
  DesignSpec spec = DesignSpec::SR;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd ehw_cov;
  /// Upper-triangular R of the thin QR of the design; bread = (R'R)^-1.
  Eigen::MatrixXd r_factor;
  HcVariant hc = HcVariant::HC0;
  std::size_t n = 0;
};

[[nodiscard]] Eigen::MatrixXd build_design(const ExperimentData& data, DesignSpec spec);

/// Least squares via Householder QR. Throws RankDeficient when the smallest
/// singular value of the design is below 1e-10 times the largest. The
/// returned fit carries its EHW covariance for the requested variant.
[[nodiscard]] RegressionFit ols_fit(const ExperimentData& data, DesignSpec spec,
                                    HcVariant hc = HcVariant::HC0);
[[nodiscard]] RegressionFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                    DesignSpec spec, HcVariant hc = HcVariant::HC0);

/// Sandwich (D'D)^-1 D' diag(w e^2) D (D'D)^-1, w set by the HC variant.
[[nodiscard]] Eigen::MatrixXd ehw_variance(const RegressionFit& fit, const Eigen::MatrixXd& design,
                                           HcVariant hc = HcVariant::HC0);

struct TreatmentEffect {
  double beta_t = 0.0;
  double var_beta_t = 0.0;
};

[[nodiscard]] TreatmentEffect ate_from_fit(const RegressionFit& fit);

}  // namespace abvr

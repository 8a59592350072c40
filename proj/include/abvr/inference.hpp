#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abvr/control_variates.hpp"
#include "abvr/data.hpp"
#include "abvr/regression.hpp"

namespace abvr {

enum class Framework { DesignBased, ModelBased };

[[nodiscard]] std::string_view to_string(Framework framework);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z);
/// Standard normal quantile, p in (0, 1).
[[nodiscard]] double normal_quantile(double p);

struct TestResult {
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p_two_sided = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.05;
  Framework framework = Framework::DesignBased;

  [[nodiscard]] bool rejects() const noexcept { return p_two_sided < alpha; }
  [[nodiscard]] bool covers(double target) const noexcept {
    return ci_low <= target && target <= ci_high;
  }
};

/// Two-sided z-test of H0: effect = 0 with a normal-quantile interval.
/// A zero variance with a non-zero estimate gives |z| = inf and p = 0; a zero
/// variance with a zero estimate gives z = 0 and p = 1.
[[nodiscard]] TestResult ztest(double estimate, double variance, double alpha,
                               Framework framework = Framework::DesignBased);

/// Row of the side-by-side estimator comparison.
struct ComparisonRow {
  std::string estimator;  // delta0..delta3, sr, ar, ir
  std::string variance;   // "design", "model" or "ehw-HC0" etc.
  std::optional<TestResult> result;
  std::string error;      // set when the estimator failed on this dataset
  std::optional<ThetaEstimate> theta;
};

struct CompareOptions {
  double alpha = 0.05;
  std::vector<ThetaMethod> theta_methods{ThetaMethod::None0, ThetaMethod::Shared1,
                                         ThetaMethod::Pooled2, ThetaMethod::GroupSpecific3};
  std::vector<DesignSpec> designs{DesignSpec::SR, DesignSpec::AR, DesignSpec::IR};
  bool design_based = true;
  bool model_based = true;
  HcVariant hc = HcVariant::HC0;
};

/// Every requested estimator on one dataset. Failures are reported per row.
[[nodiscard]] std::vector<ComparisonRow> compare_methods(const ExperimentData& data,
                                                         const CompareOptions& options);
[[nodiscard]] std::vector<ComparisonRow> compare_methods(const ExperimentData& data, double alpha);

}  // namespace abvr

#include "abvr/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace abvr {

std::string_view to_string(Framework framework) {
  return framework == Framework::DesignBased ? "design" : "model";
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

TestResult ztest(double estimate, double variance, double alpha, Framework framework) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("variance must be finite and non-negative");
  }
  TestResult r;
  r.estimate = estimate;
  r.alpha = alpha;
  r.framework = framework;
  r.se = std::sqrt(variance);
  if (r.se > 0.0) {
    r.z = estimate / r.se;
    // erfc form keeps precision in the upper tail
    r.p_two_sided = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  } else if (estimate == 0.0) {
    r.z = 0.0;
    r.p_two_sided = 1.0;
  } else {
    r.z = std::copysign(std::numeric_limits<double>::infinity(), estimate);
    r.p_two_sided = 0.0;
  }
  const double half_width = normal_quantile(1.0 - alpha / 2.0) * r.se;
  r.ci_low = estimate - half_width;
  r.ci_high = estimate + half_width;
  return r;
}

std::vector<ComparisonRow> compare_methods(const ExperimentData& data,
                                           const CompareOptions& options) {
  std::vector<ComparisonRow> rows;
  const SummaryBundle summary = summarize(data);

  for (const ThetaMethod method : options.theta_methods) {
    const std::string name(to_string(method));
    try {
      const AteResult ate = analyze(summary, method);
      if (options.design_based) {
        rows.push_back({name, "design",
                        ztest(ate.delta, ate.var_design, options.alpha, Framework::DesignBased),
                        {}, ate.theta});
      }
      if (options.model_based) {
        rows.push_back({name, "model",
                        ztest(ate.delta, ate.var_model, options.alpha, Framework::ModelBased),
                        {}, ate.theta});
      }
    } catch (const Error& e) {
      if (options.design_based) rows.push_back({name, "design", std::nullopt, e.what(), {}});
      if (options.model_based) rows.push_back({name, "model", std::nullopt, e.what(), {}});
    }
  }

  const std::string ehw = "ehw-" + std::string(to_string(options.hc));
  for (const DesignSpec spec : options.designs) {
    const std::string name(to_string(spec));
    try {
      const auto fit = ols_fit(data, spec, options.hc);
      const auto te = ate_from_fit(fit);
      rows.push_back(
          {name, ehw, ztest(te.beta_t, te.var_beta_t, options.alpha, Framework::DesignBased), {}, {}});
    } catch (const Error& e) {
      rows.push_back({name, ehw, std::nullopt, e.what(), {}});
    }
  }
  return rows;
}

std::vector<ComparisonRow> compare_methods(const ExperimentData& data, double alpha) {
  CompareOptions options;
  options.alpha = alpha;
  return compare_methods(data, options);
}

}  // namespace abvr

#include "abvr/control_variates.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace abvr {

namespace {

constexpr double kDegenerateTol = 1e-12;

void require_spread(double denominator, double var_y, const char* what) {
  if (!(denominator > kDegenerateTol * std::max(var_y, 1.0))) {
    throw DegenerateCovariate(std::string("covariate variance too small for ") + what);
  }
}

double group_term(const GroupSummary& g, double theta) {
  return (g.var_y - 2.0 * theta * g.cov_yx + theta * theta * g.var_x) /
         static_cast<double>(g.size);
}

}  // namespace

std::string_view to_string(ThetaMethod method) {
  switch (method) {
    case ThetaMethod::None0: return "delta0";
    case ThetaMethod::Shared1: return "delta1";
    case ThetaMethod::Pooled2: return "delta2";
    case ThetaMethod::GroupSpecific3: return "delta3";
  }
  return "unknown";
}

ThetaMethod theta_method_from_string(std::string_view name) {
  if (name == "delta0" || name == "none") return ThetaMethod::None0;
  if (name == "delta1" || name == "shared") return ThetaMethod::Shared1;
  if (name == "delta2" || name == "pooled") return ThetaMethod::Pooled2;
  if (name == "delta3" || name == "group") return ThetaMethod::GroupSpecific3;
  throw std::invalid_argument("unknown theta method '" + std::string(name) + "'");
}

ThetaEstimate estimate_theta(const SummaryBundle& s, ThetaMethod method) {
  const auto& tr = s.treatment;
  const auto& co = s.control;
  switch (method) {
    case ThetaMethod::None0:
      return {0.0, 0.0, method};
    case ThetaMethod::Shared1: {
      require_spread(s.full.var_x, s.full.var_y, "the shared coefficient");
      const double theta = s.full.cov_yx / s.full.var_x;
      return {theta, theta, method};
    }
    case ThetaMethod::Pooled2: {
      require_spread(tr.var_x + co.var_x, tr.var_y + co.var_y, "the pooled coefficient");
      // Covariances of the group means: each group's moment scaled by 1/n_g.
      const auto nt = static_cast<double>(tr.size);
      const auto nc = static_cast<double>(co.size);
      const double theta =
          (tr.cov_yx / nt + co.cov_yx / nc) / (tr.var_x / nt + co.var_x / nc);
      return {theta, theta, method};
    }
    case ThetaMethod::GroupSpecific3:
      require_spread(tr.var_x, tr.var_y, "the treatment-group coefficient");
      require_spread(co.var_x, co.var_y, "the control-group coefficient");
      return {tr.cov_yx / tr.var_x, co.cov_yx / co.var_x, method};
  }
  throw std::invalid_argument("invalid theta method");
}

ThetaEstimate estimate_theta(const ExperimentData& data, ThetaMethod method) {
  return estimate_theta(summarize(data), method);
}

double estimate_delta(const SummaryBundle& s, const ThetaEstimate& theta) {
  const double xbar = s.full.mean_x;
  const double adj_t = s.treatment.mean_y - theta.theta_t * (s.treatment.mean_x - xbar);
  const double adj_c = s.control.mean_y - theta.theta_c * (s.control.mean_x - xbar);
  return adj_t - adj_c;
}

double estimate_delta(const ExperimentData& data, const ThetaEstimate& theta) {
  return estimate_delta(summarize(data), theta);
}

double variance_design(const SummaryBundle& s, const ThetaEstimate& theta) {
  const double v = group_term(s.treatment, theta.theta_t) + group_term(s.control, theta.theta_c);
  // Cauchy-Schwarz keeps each term >= 0; only rounding can push it below.
  return std::max(v, 0.0);
}

double variance_design(const ExperimentData& data, const ThetaEstimate& theta) {
  return variance_design(summarize(data), theta);
}

ModelVariance variance_model(const SummaryBundle& s, const ThetaEstimate& theta) {
  const double gap = theta.theta_t - theta.theta_c;
  const double correction = gap * gap * s.full.var_x / static_cast<double>(s.full.size);
  return {variance_design(s, theta) + correction, correction};
}

ModelVariance variance_model(const ExperimentData& data, const ThetaEstimate& theta) {
  return variance_model(summarize(data), theta);
}

AteResult analyze(const SummaryBundle& s, ThetaMethod method) {
  AteResult r;
  r.method = method;
  r.theta = estimate_theta(s, method);
  r.delta = estimate_delta(s, r.theta);
  r.var_design = variance_design(s, r.theta);
  const auto model = variance_model(s, r.theta);
  r.correction = model.correction;
  r.var_model = r.var_design + r.correction;
  return r;
}

AteResult analyze(const ExperimentData& data, ThetaMethod method) {
  return analyze(summarize(data), method);
}

void check_params(const AsymptoticParams& params) {
  if (!(params.p_t > 0.0 && params.p_t < 1.0)) {
    throw std::invalid_argument("p_t must lie in (0, 1)");
  }
  if (params.var_yt < 0.0 || params.var_yc < 0.0 || params.var_x < 0.0) {
    throw std::invalid_argument("variances must be non-negative");
  }
}

std::pair<double, double> plim_theta(const AsymptoticParams& params, ThetaMethod method) {
  check_params(params);
  const double pt = params.p_t;
  const double pc = 1.0 - pt;
  switch (method) {
    case ThetaMethod::None0:
      return {0.0, 0.0};
    case ThetaMethod::Shared1: {
      const double th = pt * params.theta_t + pc * params.theta_c;
      return {th, th};
    }
    case ThetaMethod::Pooled2: {
      const double th = pt * params.theta_c + pc * params.theta_t;
      return {th, th};
    }
    case ThetaMethod::GroupSpecific3:
      return {params.theta_t, params.theta_c};
  }
  throw std::invalid_argument("invalid theta method");
}

ScaledVarianceLimits plim_variances(const AsymptoticParams& params, ThetaMethod method) {
  check_params(params);
  const double pt = params.p_t;
  const double pc = 1.0 - pt;
  const double tt = params.theta_t;
  const double tc = params.theta_c;
  const double base = params.var_yt / pt + params.var_yc / pc;

  if (method == ThetaMethod::GroupSpecific3) {
    ScaledVarianceLimits out;
    out.n_var_true = base - ((pc / pt) * tt * tt + 2.0 * tt * tc + (pt / pc) * tc * tc) * params.var_x;
    out.n_var_hat = base - (tt * tt / pt + tc * tc / pc) * params.var_x;
    return out;
  }
  const double tk = plim_theta(params, method).first;
  const double v =
      base - ((2.0 * tk * tt - tk * tk) / pt + (2.0 * tk * tc - tk * tk) / pc) * params.var_x;
  return {v, v};
}

}  // namespace abvr

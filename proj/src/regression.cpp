#include "abvr/regression.hpp"

#include <stdexcept>
#include <string>

namespace abvr {

namespace {

constexpr double kRankTol = 1e-10;

Eigen::MatrixXd inverse_upper(const Eigen::MatrixXd& r) {
  const auto k = r.rows();
  return r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
}

}  // namespace

std::string_view to_string(DesignSpec spec) {
  switch (spec) {
    case DesignSpec::SR: return "sr";
    case DesignSpec::AR: return "ar";
    case DesignSpec::IR: return "ir";
  }
  return "unknown";
}

DesignSpec design_spec_from_string(std::string_view name) {
  if (name == "sr" || name == "SR") return DesignSpec::SR;
  if (name == "ar" || name == "AR") return DesignSpec::AR;
  if (name == "ir" || name == "IR") return DesignSpec::IR;
  throw std::invalid_argument("unknown regression design '" + std::string(name) + "'");
}

std::string_view to_string(HcVariant variant) {
  switch (variant) {
    case HcVariant::HC0: return "HC0";
    case HcVariant::HC1: return "HC1";
    case HcVariant::HC2: return "HC2";
    case HcVariant::HC3: return "HC3";
  }
  return "unknown";
}

HcVariant hc_variant_from_string(std::string_view name) {
  if (name == "HC0" || name == "hc0") return HcVariant::HC0;
  if (name == "HC1" || name == "hc1") return HcVariant::HC1;
  if (name == "HC2" || name == "hc2") return HcVariant::HC2;
  if (name == "HC3" || name == "hc3") return HcVariant::HC3;
  throw std::invalid_argument("unknown HC variant '" + std::string(name) + "'");
}

Eigen::MatrixXd build_design(const ExperimentData& data, DesignSpec spec) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto k = column_count(spec);
  Eigen::MatrixXd d(n, k);

  CompensatedSum sx;
  for (double v : data.x()) sx.add(v);
  const double xbar = sx.value() / static_cast<double>(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = data.t()[i];
    const double xc = data.x()[i] - xbar;
    d(i, 0) = 1.0;
    d(i, 1) = t;
    if (k > 2) d(i, 2) = xc;
    if (k > 3) d(i, 3) = t * xc;
  }
  return d;
}

RegressionFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, DesignSpec spec,
                      HcVariant hc) {
  const auto k = design.cols();
  if (k != column_count(spec) || design.rows() != y.size()) {
    throw std::invalid_argument("design shape does not match specification");
  }
  if (design.rows() <= k) {
    throw RankDeficient("fewer observations than regression coefficients");
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sv = svd.singularValues();
  if (!(sv(k - 1) > kRankTol * sv(0))) {
    throw RankDeficient(std::string("design for ") + std::string(to_string(spec)) +
                        " is rank deficient");
  }

  RegressionFit fit;
  fit.spec = spec;
  fit.n = static_cast<std::size_t>(design.rows());
  fit.coeffs = qr.solve(y);
  fit.residuals = y - design * fit.coeffs;
  fit.r_factor = std::move(r);
  fit.hc = hc;
  fit.ehw_cov = ehw_variance(fit, design, hc);
  return fit;
}

RegressionFit ols_fit(const ExperimentData& data, DesignSpec spec, HcVariant hc) {
  const Eigen::MatrixXd design = build_design(data, spec);
  const Eigen::Map<const Eigen::VectorXd> y(data.y().data(),
                                            static_cast<Eigen::Index>(data.n()));
  return ols_fit(design, y, spec, hc);
}

Eigen::MatrixXd ehw_variance(const RegressionFit& fit, const Eigen::MatrixXd& design,
                             HcVariant hc) {
  const auto n = design.rows();
  const auto k = design.cols();
  if (fit.r_factor.rows() != k || fit.residuals.size() != n) {
    throw std::invalid_argument("fit does not belong to this design");
  }
  const Eigen::MatrixXd r_inv = inverse_upper(fit.r_factor);
  const Eigen::MatrixXd bread = r_inv * r_inv.transpose();

  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = design.row(i);
    double w = fit.residuals(i) * fit.residuals(i);
    if (hc == HcVariant::HC2 || hc == HcVariant::HC3) {
      // leverage h_ii = d_i' (D'D)^-1 d_i = |R^-T d_i|^2
      const double h = (row * r_inv).squaredNorm();
      const double one_minus_h = 1.0 - h;
      if (!(one_minus_h > 0.0)) throw RankDeficient("observation with leverage 1");
      w /= hc == HcVariant::HC2 ? one_minus_h : one_minus_h * one_minus_h;
    }
    meat.selfadjointView<Eigen::Lower>().rankUpdate(row.transpose(), w);
  }
  meat = meat.selfadjointView<Eigen::Lower>();
  if (hc == HcVariant::HC1) {
    meat *= static_cast<double>(n) / static_cast<double>(n - k);
  }
  Eigen::MatrixXd cov = bread * meat * bread;
  return 0.5 * (cov + cov.transpose());
}

TreatmentEffect ate_from_fit(const RegressionFit& fit) {
  return {fit.coeffs(kTreatmentColumn), fit.ehw_cov(kTreatmentColumn, kTreatmentColumn)};
}

}  // namespace abvr

#include "abvr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "abvr/parallel.hpp"

namespace abvr {

namespace {

constexpr ThetaMethod theta_method_of(Estimator e) {
  switch (e) {
    case Estimator::Delta0: return ThetaMethod::None0;
    case Estimator::Delta1: return ThetaMethod::Shared1;
    case Estimator::Delta2: return ThetaMethod::Pooled2;
    default: return ThetaMethod::GroupSpecific3;
  }
}

constexpr bool is_regression(Estimator e) {
  return e == Estimator::SR || e == Estimator::AR || e == Estimator::IR;
}

constexpr DesignSpec design_of(Estimator e) {
  switch (e) {
    case Estimator::SR: return DesignSpec::SR;
    case Estimator::AR: return DesignSpec::AR;
    default: return DesignSpec::IR;
  }
}

Framework primary_framework(SimFramework f) {
  return f == SimFramework::Finite ? Framework::DesignBased : Framework::ModelBased;
}

double mean_of(std::span<const double> v) {
  CompensatedSum s;
  for (double a : v) s.add(a);
  return s.value() / static_cast<double>(v.size());
}

}  // namespace

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::Delta0: return "delta0";
    case Estimator::Delta1: return "delta1";
    case Estimator::Delta2: return "delta2";
    case Estimator::Delta3: return "delta3";
    case Estimator::SR: return "sr";
    case Estimator::AR: return "ar";
    case Estimator::IR: return "ir";
  }
  return "unknown";
}

Estimator estimator_from_string(std::string_view name) {
  for (const Estimator e : all_estimators()) {
    if (to_string(e) == name) return e;
  }
  if (name == "SR") return Estimator::SR;
  if (name == "AR") return Estimator::AR;
  if (name == "IR") return Estimator::IR;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

const std::vector<Estimator>& all_estimators() {
  static const std::vector<Estimator> all{Estimator::Delta0, Estimator::Delta1, Estimator::Delta2,
                                          Estimator::Delta3, Estimator::SR,     Estimator::AR,
                                          Estimator::IR};
  return all;
}

std::string_view to_string(SimFramework f) {
  switch (f) {
    case SimFramework::Finite: return "finite";
    case SimFramework::Infinite: return "infinite";
    case SimFramework::Bootstrap: return "bootstrap";
  }
  return "unknown";
}

SimFramework sim_framework_from_string(std::string_view name) {
  if (name == "finite") return SimFramework::Finite;
  if (name == "infinite") return SimFramework::Infinite;
  if (name == "bootstrap") return SimFramework::Bootstrap;
  throw std::invalid_argument("unknown framework '" + std::string(name) + "'");
}

std::vector<EstimatorOutput> evaluate(const ExperimentData& data,
                                      std::span<const Estimator> estimators, HcVariant hc) {
  std::vector<EstimatorOutput> out(estimators.size());
  const SummaryBundle summary = summarize(data);
  const Eigen::Map<const Eigen::VectorXd> y(data.y().data(), static_cast<Eigen::Index>(data.n()));

  Eigen::MatrixXd ir_design;  // built once, AR/SR are its leading columns
  bool have_design = false;

  for (std::size_t j = 0; j < estimators.size(); ++j) {
    const Estimator e = estimators[j];
    try {
      if (!is_regression(e)) {
        const AteResult r = analyze(summary, theta_method_of(e));
        out[j] = {r.delta, r.var_design, r.var_model, true};
        continue;
      }
      if (!have_design) {
        ir_design = build_design(data, DesignSpec::IR);
        have_design = true;
      }
      const DesignSpec spec = design_of(e);
      const Eigen::MatrixXd design = ir_design.leftCols(column_count(spec));
      const RegressionFit fit = ols_fit(design, y, spec, hc);
      const TreatmentEffect te = ate_from_fit(fit);
      double var_model = te.var_beta_t;
      if (spec == DesignSpec::IR) {
        // treated slope minus control slope
        const double gap = fit.coeffs(3);
        var_model += gap * gap * summary.full.var_x / static_cast<double>(data.n());
      }
      out[j] = {te.beta_t, te.var_beta_t, var_model, true};
    } catch (const DegenerateCovariate&) {
      out[j].ok = false;
    } catch (const RankDeficient&) {
      out[j].ok = false;
    }
  }
  return out;
}

std::size_t treated_count(std::size_t n, double p_t) {
  return static_cast<std::size_t>(std::llround(p_t * static_cast<double>(n)));
}

void check_config(const DgpConfig& cfg) {
  if (!(cfg.p_t > 0.0 && cfg.p_t < 1.0)) throw std::invalid_argument("p_t must lie in (0, 1)");
  if (!(cfg.x_var > 0.0)) throw std::invalid_argument("x_var must be positive");
  if (!(cfg.noise_var > 0.0)) throw std::invalid_argument("noise_var must be positive");
  const std::size_t nt = treated_count(cfg.n, cfg.p_t);
  if (nt < 2 || cfg.n < nt + 2) {
    throw InfeasibleAllocation("n = " + std::to_string(cfg.n) + " with p_t = " +
                               std::to_string(cfg.p_t) + " leaves an arm with fewer than 2 units");
  }
}

PopulationTable generate_population(const DgpConfig& cfg, Engine& engine) {
  check_config(cfg);
  const double sx = std::sqrt(cfg.x_var);
  const double se = std::sqrt(cfg.noise_var);
  PopulationTable pop;
  pop.x.resize(cfg.n);
  pop.y_t.resize(cfg.n);
  pop.y_c.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double x = sx * standard_normal(engine);
    const double et = se * standard_normal(engine);
    const double ec = se * standard_normal(engine);
    pop.x[i] = x;
    pop.y_t[i] = cfg.intercept + cfg.ate + (1.0 + cfg.hte) * x + et;
    pop.y_c[i] = cfg.intercept + x + ec;
  }
  return pop;
}

PopulationTable generate_population(const DgpConfig& cfg, std::uint64_t seed) {
  Engine engine = make_engine(seed, Stream::Population, 0);
  return generate_population(cfg, engine);
}

ExperimentData assign(const PopulationTable& pop, double p_t, Engine& engine) {
  const std::size_t n = pop.n();
  if (!(p_t > 0.0 && p_t < 1.0)) throw InfeasibleAllocation("p_t must lie in (0, 1)");
  const std::size_t nt = treated_count(n, p_t);
  if (nt < 2 || n < nt + 2) {
    throw InfeasibleAllocation("allocation leaves an arm with fewer than 2 units");
  }
  std::vector<std::uint8_t> t(n);
  choose_subset(engine, t, nt);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = t[i] ? pop.y_t[i] : pop.y_c[i];
  return validate(std::move(y), pop.x, std::move(t));
}

ExperimentData assign(const PopulationTable& pop, double p_t, std::uint64_t seed) {
  Engine engine = make_engine(seed, Stream::Assignment, 0);
  return assign(pop, p_t, engine);
}

PopulationQuantities population_quantities(const PopulationTable& pop, double theta) {
  const std::size_t n = pop.n();
  if (n < 2 || pop.y_t.size() != n || pop.y_c.size() != n) {
    throw LengthMismatch("population table columns must have equal length >= 2");
  }
  const double xbar = mean_of(pop.x);
  std::vector<double> wt(n), wc(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    wt[i] = pop.y_t[i] - theta * (pop.x[i] - xbar);
    wc[i] = pop.y_c[i] - theta * (pop.x[i] - xbar);
    diff[i] = wt[i] - wc[i];
  }
  const Moments mt = compute_moments(wt, diff);
  const Moments mc = compute_moments(wc, diff);
  PopulationQuantities q;
  q.mean_wt = mt.mean_y;
  q.mean_wc = mc.mean_y;
  q.delta_s = mt.mean_x;
  q.s2_t = mt.var_y;
  q.s2_c = mc.var_y;
  q.s2_delta = mt.var_x;
  return q;
}

std::vector<ReplicationDraw> replicate_finite(const DgpConfig& cfg, const SimOptions& options) {
  const PopulationTable pop = generate_population(cfg, options.seed);
  const double target = population_quantities(pop, 0.0).delta_s;
  std::vector<ReplicationDraw> draws(options.reps);
  parallel_for(options.reps, options.threads, [&](std::size_t r) {
    Engine engine = make_engine(options.seed, Stream::Assignment, r);
    const ExperimentData data = assign(pop, cfg.p_t, engine);
    draws[r] = {evaluate(data, options.methods, options.hc), target, cfg.n};
  });
  return draws;
}

std::vector<ReplicationDraw> replicate_infinite(const DgpConfig& cfg, const SimOptions& options) {
  check_config(cfg);
  std::vector<ReplicationDraw> draws(options.reps);
  parallel_for(options.reps, options.threads, [&](std::size_t r) {
    Engine pop_engine = make_engine(options.seed, Stream::Population, r);
    Engine assign_engine = make_engine(options.seed, Stream::Assignment, r);
    const PopulationTable pop = generate_population(cfg, pop_engine);
    const ExperimentData data = assign(pop, cfg.p_t, assign_engine);
    draws[r] = {evaluate(data, options.methods, options.hc), cfg.ate, cfg.n};
  });
  return draws;
}

std::vector<SimResult> aggregate(std::span<const ReplicationDraw> draws, const SimOptions& options,
                                 Framework primary) {
  std::vector<SimResult> results;
  results.reserve(options.methods.size());
  for (std::size_t j = 0; j < options.methods.size(); ++j) {
    SimResult res;
    res.method = options.methods[j];
    res.framework = primary;
    res.seed = options.seed;

    std::size_t ok = 0, rej_d = 0, rej_m = 0, cov_d = 0, cov_m = 0;
    CompensatedSum est_sum, vd_sum, vm_sum;
    for (const auto& draw : draws) {
      const EstimatorOutput& o = draw.outputs.at(j);
      if (!o.ok) {
        ++res.failed;
        continue;
      }
      ++ok;
      const TestResult td = ztest(o.estimate, o.var_design, options.alpha, Framework::DesignBased);
      const TestResult tm = ztest(o.estimate, o.var_model, options.alpha, Framework::ModelBased);
      rej_d += td.rejects();
      rej_m += tm.rejects();
      cov_d += td.covers(draw.target);
      cov_m += tm.covers(draw.target);
      est_sum.add(o.estimate);
      vd_sum.add(o.var_design);
      vm_sum.add(o.var_model);
    }
    res.reps = ok;
    if (ok > 0) {
      const auto cnt = static_cast<double>(ok);
      res.rejection_rate_design = static_cast<double>(rej_d) / cnt;
      res.rejection_rate_model = static_cast<double>(rej_m) / cnt;
      res.coverage_design = static_cast<double>(cov_d) / cnt;
      res.coverage_model = static_cast<double>(cov_m) / cnt;
      res.mean_estimate = est_sum.value() / cnt;
      res.mean_var_design = vd_sum.value() / cnt;
      res.mean_var_model = vm_sum.value() / cnt;
      if (ok > 1) {
        CompensatedSum ss;
        for (const auto& draw : draws) {
          const EstimatorOutput& o = draw.outputs[j];
          if (!o.ok) continue;
          const double d = o.estimate - res.mean_estimate;
          ss.add(d * d);
        }
        res.empirical_variance = ss.value() / (cnt - 1.0);
      }
    }
    const bool design = primary == Framework::DesignBased;
    res.rejection_rate = design ? res.rejection_rate_design : res.rejection_rate_model;
    res.coverage = design ? res.coverage_design : res.coverage_model;
    res.mean_var_estimate = design ? res.mean_var_design : res.mean_var_model;
    results.push_back(res);
  }
  return results;
}

std::vector<SimResult> run_finite(const DgpConfig& cfg, const SimOptions& options) {
  const auto draws = replicate_finite(cfg, options);
  return aggregate(draws, options, primary_framework(SimFramework::Finite));
}

std::vector<SimResult> run_infinite(const DgpConfig& cfg, const SimOptions& options) {
  const auto draws = replicate_infinite(cfg, options);
  return aggregate(draws, options, primary_framework(SimFramework::Infinite));
}

double sample_quantile(std::span<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sample_quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ConvergenceRow> convergence_scan(const DgpConfig& cfg,
                                             std::span<const std::size_t> n_grid,
                                             const SimOptions& options, SimFramework framework) {
  if (framework == SimFramework::Bootstrap) {
    throw std::invalid_argument("convergence_scan supports the finite and infinite frameworks");
  }
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw std::invalid_argument("n grid must be ascending");
  }
  SimOptions opts = options;
  auto base = std::find(opts.methods.begin(), opts.methods.end(), Estimator::Delta3);
  if (base == opts.methods.end()) {
    opts.methods.push_back(Estimator::Delta3);
    base = opts.methods.end() - 1;
  }
  const auto base_index = static_cast<std::size_t>(base - opts.methods.begin());
  const bool design = primary_framework(framework) == Framework::DesignBased;

  std::vector<ConvergenceRow> rows;
  for (const std::size_t n : n_grid) {
    DgpConfig c = cfg;
    c.n = n;
    opts.seed = splitmix64(options.seed ^ splitmix64(n));
    const auto draws =
        framework == SimFramework::Finite ? replicate_finite(c, opts) : replicate_infinite(c, opts);
    const double root_n = std::sqrt(static_cast<double>(n));

    for (std::size_t j = 0; j < opts.methods.size(); ++j) {
      std::vector<double> disc, scaled;
      for (const auto& d : draws) {
        const auto& o = d.outputs[j];
        if (!o.ok) continue;
        scaled.push_back(static_cast<double>(n) * (design ? o.var_design : o.var_model));
        if (j != base_index && d.outputs[base_index].ok) {
          disc.push_back(root_n * (o.estimate - d.outputs[base_index].estimate));
        }
      }
      for (const double q : kScanQuantiles) {
        if (!disc.empty()) {
          rows.push_back({"discrepancy", n, opts.methods[j], q, sample_quantile(disc, q)});
        }
      }
      for (const double q : kScanQuantiles) {
        if (!scaled.empty()) {
          rows.push_back({"scaled_variance", n, opts.methods[j], q, sample_quantile(scaled, q)});
        }
      }
    }
  }
  return rows;
}

SourceTable generate_pseudo_real(std::size_t size, std::uint64_t seed) {
  Engine engine = make_engine(seed, Stream::Source, 0);
  SourceTable table;
  table.x.resize(size);
  table.y.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double x = std::exp(1.0 + 0.6 * standard_normal(engine));
    const double noise = std::sqrt(0.5 + 0.25 * x) * standard_normal(engine);
    table.x[i] = x;
    table.y[i] = 0.5 + 0.9 * x + noise;
  }
  return table;
}

std::vector<ReplicationDraw> replicate_bootstrap(const SourceTable& source,
                                                 const BootstrapConfig& cfg,
                                                 const SimOptions& options) {
  if (source.x.size() != source.y.size()) throw LengthMismatch("source columns differ in length");
  if (cfg.m > source.size()) {
    throw InfeasibleAllocation("resample size exceeds the source table");
  }
  const std::size_t nt = treated_count(cfg.m, cfg.p_t);
  if (!(cfg.p_t > 0.0 && cfg.p_t < 1.0) || nt < 2 || cfg.m < nt + 2) {
    throw InfeasibleAllocation("resample allocation leaves an arm with fewer than 2 units");
  }
  const double source_mean_x = mean_of(source.x);

  std::vector<ReplicationDraw> draws(options.reps);
  parallel_for(options.reps, options.threads, [&](std::size_t r) {
    Engine pick = make_engine(options.seed, Stream::Resample, r);
    Engine assign_engine = make_engine(options.seed, Stream::Assignment, r);
    std::vector<double> y(cfg.m), x(cfg.m);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      const std::size_t k = uniform_index(pick, source.size());
      y[i] = source.y[k];
      x[i] = source.x[k];
    }
    std::vector<std::uint8_t> t(cfg.m);
    choose_subset(assign_engine, t, nt);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      if (t[i]) y[i] += cfg.ate + cfg.hte * (x[i] - source_mean_x);
    }
    const ExperimentData data = validate(std::move(y), std::move(x), std::move(t));
    draws[r] = {evaluate(data, options.methods, options.hc), cfg.ate, cfg.m};
  });
  return draws;
}

std::vector<SimResult> bootstrap_superpopulation(const SourceTable& source,
                                                 const BootstrapConfig& cfg,
                                                 const SimOptions& options) {
  const auto draws = replicate_bootstrap(source, cfg, options);
  return aggregate(draws, options, primary_framework(SimFramework::Bootstrap));
}

}  // namespace abvr

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "abvr/cli.hpp"
#include "abvr/control_variates.hpp"
#include "abvr/regression.hpp"
#include "abvr/rng.hpp"
#include "abvr/simulation.hpp"

using namespace abvr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median(std::vector<double> v) {
  return sample_quantile(v, 0.5);
}

std::size_t index_of(const std::vector<Estimator>& methods, Estimator e) {
  return static_cast<std::size_t>(std::find(methods.begin(), methods.end(), e) - methods.begin());
}

const SimResult& result_for(const std::vector<SimResult>& rs, Estimator e) {
  return *std::find_if(rs.begin(), rs.end(), [e](const SimResult& r) { return r.method == e; });
}

// --- 1 ---------------------------------------------------------------------

Outcome exact_identities() {
  Outcome o;
  auto engine = make_engine(101, Stream::Source, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_sr = 0.0, worst_ir = 0.0;
  const std::size_t sizes[] = {10, 100, 1000, 10000};
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = sizes[k % 4];
    const double p_t = 0.2 + 0.6 * u(engine);
    const double ate = (u(engine) < 0.5 ? -1.0 : 1.0) * (1.0 + 4.0 * u(engine));
    const double a = 10.0 * (u(engine) - 0.5);
    const double bc = 4.0 * (u(engine) - 0.5);
    const double bt = bc + 2.0 * (u(engine) - 0.5);
    const double sx = 0.5 + 3.0 * u(engine);
    const double mx = 5.0 * (u(engine) - 0.5);
    const double se = 0.1 + 0.9 * u(engine);
    std::vector<double> y(n), x(n);
    std::vector<std::uint8_t> t(n);
    choose_subset(engine, t, treated_count(n, p_t));
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = mx + sx * standard_normal(engine);
      y[i] = a + (t[i] ? ate + bt * x[i] : bc * x[i]) + se * standard_normal(engine);
    }
    const auto d = validate(std::move(y), std::move(x), std::move(t));
    const double d0 = analyze(d, ThetaMethod::None0).delta;
    const double d3 = analyze(d, ThetaMethod::GroupSpecific3).delta;
    const double sr = ate_from_fit(ols_fit(d, DesignSpec::SR)).beta_t;
    const double ir = ate_from_fit(ols_fit(d, DesignSpec::IR)).beta_t;
    worst_sr = std::max(worst_sr, std::abs(d0 - sr) / std::max(std::abs(d0), std::abs(sr)));
    worst_ir = std::max(worst_ir, std::abs(d3 - ir) / std::max(std::abs(d3), std::abs(ir)));
  }
  o.require(worst_sr <= 1e-8, "max rel |delta0-SR| = " + fmt("%.2e", worst_sr));
  o.require(worst_ir <= 1e-8, "max rel |delta3-IR| = " + fmt("%.2e", worst_ir));
  return o;
}

// --- 2, 3, 4 share replications ---------------------------------------------

struct LargeSampleRuns {
  std::vector<ReplicationDraw> small_hte;  // n = 1e3, hte = 0.5
  std::vector<ReplicationDraw> large_hte;  // n = 1e5, hte = 0.5
  std::vector<ReplicationDraw> large_homo; // n = 1e5, hte = 0
  SimOptions options;
};

LargeSampleRuns large_sample_runs() {
  LargeSampleRuns r;
  r.options.reps = 200;
  r.options.seed = 20240602;
  DgpConfig c;
  c.p_t = 0.4;
  c.ate = 0.1;
  c.hte = 0.5;
  c.n = 1000;
  r.small_hte = replicate_infinite(c, r.options);
  c.n = 100000;
  r.large_hte = replicate_infinite(c, r.options);
  c.hte = 0.0;
  r.large_homo = replicate_infinite(c, r.options);
  return r;
}

std::vector<double> collect(const std::vector<ReplicationDraw>& draws,
                            const std::function<double(const ReplicationDraw&)>& f) {
  std::vector<double> v;
  v.reserve(draws.size());
  for (const auto& d : draws) v.push_back(f(d));
  return v;
}

Outcome asymptotic_equivalences(const LargeSampleRuns& runs) {
  Outcome o;
  const auto& m = runs.options.methods;
  auto est = [&](const ReplicationDraw& d, Estimator e) { return d.outputs[index_of(m, e)].estimate; };
  auto var = [&](const ReplicationDraw& d, Estimator e) {
    return d.outputs[index_of(m, e)].var_design;
  };
  struct Metric {
    const char* name;
    std::function<double(const ReplicationDraw&)> f;
  };
  const std::vector<Metric> metrics{
      {"sqrt(n)|delta2-delta3|",
       [&](const ReplicationDraw& d) {
         return std::sqrt(double(d.n)) * std::abs(est(d, Estimator::Delta2) - est(d, Estimator::Delta3));
       }},
      {"sqrt(n)|delta1-AR|",
       [&](const ReplicationDraw& d) {
         return std::sqrt(double(d.n)) * std::abs(est(d, Estimator::Delta1) - est(d, Estimator::AR));
       }},
      {"n|var(delta0)-EHW(SR)|",
       [&](const ReplicationDraw& d) {
         return double(d.n) * std::abs(var(d, Estimator::Delta0) - var(d, Estimator::SR));
       }},
      {"n|var(delta1)-EHW(AR)|",
       [&](const ReplicationDraw& d) {
         return double(d.n) * std::abs(var(d, Estimator::Delta1) - var(d, Estimator::AR));
       }},
      {"n|var(delta3)-EHW(IR)|",
       [&](const ReplicationDraw& d) {
         return double(d.n) * std::abs(var(d, Estimator::Delta3) - var(d, Estimator::IR));
       }},
  };
  for (const auto& metric : metrics) {
    const double small = median(collect(runs.small_hte, metric.f));
    const double large = median(collect(runs.large_hte, metric.f));
    const double ratio = small / large;
    o.require(ratio >= 3.0, std::string(metric.name) + " drop x" + fmt("%.1f", ratio));
  }
  return o;
}

Outcome divergence_case(const LargeSampleRuns& runs) {
  Outcome o;
  const auto& m = runs.options.methods;
  auto gap = [&](const ReplicationDraw& d) {
    return std::sqrt(double(d.n)) * std::abs(d.outputs[index_of(m, Estimator::Delta1)].estimate -
                                             d.outputs[index_of(m, Estimator::Delta3)].estimate);
  };
  const double with_hte = median(collect(runs.large_hte, gap));
  const double without = median(collect(runs.large_homo, gap));
  o.require(with_hte > 5.0 * without, "median sqrt(n)|delta1-delta3| " + fmt("%.4f", with_hte) +
                                          " (hte=0.5) vs " + fmt("%.4f", without) + " (hte=0)");
  return o;
}

Outcome variance_ordering(const LargeSampleRuns& runs) {
  Outcome o;
  const auto& m = runs.options.methods;
  auto share = [&](Estimator lo, Estimator hi) {
    std::size_t ok = 0;
    for (const auto& d : runs.large_hte) {
      ok += d.outputs[index_of(m, lo)].var_design <= d.outputs[index_of(m, hi)].var_design ? 1 : 0;
    }
    return double(ok) / double(runs.large_hte.size());
  };
  const struct {
    Estimator lo, hi;
    const char* label;
  } pairs[] = {{Estimator::Delta3, Estimator::Delta1, "var(delta3)<=var(delta1)"},
               {Estimator::Delta3, Estimator::Delta2, "var(delta3)<=var(delta2)"},
               {Estimator::IR, Estimator::SR, "EHW(IR)<=EHW(SR)"},
               {Estimator::IR, Estimator::AR, "EHW(IR)<=EHW(AR)"}};
  for (const auto& p : pairs) {
    const double s = share(p.lo, p.hi);
    o.require(s >= 0.99, std::string(p.label) + " in " + fmt("%.3f", s));
  }
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome power_table_reproduction() {
  Outcome o;
  SimOptions opts;
  opts.reps = 2000;
  opts.methods = {Estimator::Delta0, Estimator::Delta1, Estimator::Delta3};
  DgpConfig power;
  power.n = 3000;
  power.x_var = 4.0;
  power.p_t = 0.5;
  power.ate = 0.1;
  power.hte = 0.5;
  const auto pr = run_finite(power, opts);
  const double p3 = result_for(pr, Estimator::Delta3).rejection_rate;
  const double p0 = result_for(pr, Estimator::Delta0).rejection_rate;
  o.require(std::abs(p3 - 0.851) <= 0.05, "power(delta3) " + fmt("%.4f", p3) + " vs 0.851");
  o.require(std::abs(p0 - 0.183) <= 0.05, "power(delta0) " + fmt("%.4f", p0) + " vs 0.183");

  DgpConfig null = power;
  null.p_t = 0.4;
  null.ate = 0.0;
  const auto nr = run_finite(null, opts);
  const double t1 = result_for(nr, Estimator::Delta1).rejection_rate;
  const double t3 = result_for(nr, Estimator::Delta3).rejection_rate;
  o.require(t1 <= 0.05, "typeI(delta1) " + fmt("%.4f", t1));
  o.require(t3 <= 0.055, "typeI(delta3) " + fmt("%.4f", t3));
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome variance_gap() {
  Outcome o;
  const AsymptoticParams params{0.5, 1.5, 1.0, 5.5, 3.0, 2.0};
  const auto lim = plim_variances(params, ThetaMethod::GroupSpecific3);
  o.require(lim.n_var_true == 4.5 && lim.n_var_hat == 4.0,
            "plim (" + fmt("%.17g", lim.n_var_true) + ", " + fmt("%.17g", lim.n_var_hat) + ")");

  DgpConfig c;
  c.n = 3000;
  c.p_t = 0.5;
  c.hte = 0.5;
  SimOptions opts;
  opts.reps = 10000;
  opts.methods = {Estimator::Delta3};
  const auto r = run_infinite(c, opts).front();
  const double gap = double(c.n) * (r.empirical_variance - r.mean_var_design);
  o.require(std::abs(gap - 0.5) <= 0.2, "n(empirical var - mean uncorrected var) = " + fmt("%.3f", gap));
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome coverage_correction() {
  Outcome o;
  DgpConfig c;
  c.n = 3000;
  c.p_t = 0.5;
  SimOptions opts;
  opts.reps = 5000;
  opts.methods = {Estimator::Delta3};
  c.hte = 2.0;
  const auto strong = run_infinite(c, opts).front();
  o.require(strong.coverage_design <= 0.80,
            "hte=2 uncorrected " + fmt("%.4f", strong.coverage_design));
  o.require(strong.coverage_model >= 0.935 && strong.coverage_model <= 0.965,
            "hte=2 corrected " + fmt("%.4f", strong.coverage_model));
  c.hte = 0.0;
  const auto none = run_infinite(c, opts).front();
  for (double cov : {none.coverage_design, none.coverage_model}) {
    o.require(cov >= 0.94 && cov <= 0.96, "hte=0 coverage " + fmt("%.4f", cov));
  }
  return o;
}

// --- 8 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "abvr_acceptance";
  fs::create_directories(dir);
  const std::string scenario = (fs::path(ABVR_SCENARIO_DIR) / "table3.json").string();
  for (const char* format : {"csv", "json"}) {
    std::vector<std::string> files;
    for (const char* threads : {"1", "1", "4", "0"}) {
      const fs::path out = dir / ("run" + std::to_string(files.size()) + "." + format);
      std::ostringstream sink, err;
      const int code = run_cli({"simulate", "--config", scenario, "--reps", "40", "--seed", "7",
                                "--threads", threads, "--format", format, "--output", out.string()},
                               sink, err);
      if (code != 0) o.require(false, "simulate failed: " + err.str());
      files.push_back(slurp(out));
    }
    const bool same = !files[0].empty() &&
                      std::all_of(files.begin(), files.end(), [&](const auto& f) { return f == files[0]; });
    o.require(same, std::string(format) + " outputs identical over repeat runs and threads 1/4/auto");
  }
  return o;
}

}  // namespace

int main() {
  // outputs must not pick up a build-time timestamp or seed override
  unsetenv("SOURCE_DATE_EPOCH");
  unsetenv("AB_SEED");

  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome out = run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s | %s | %.1fs\n", out.pass ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  };

  report(1, "exact identities", exact_identities);
  LargeSampleRuns runs;
  const auto t0 = std::chrono::steady_clock::now();
  runs = large_sample_runs();
  std::printf("(shared large-sample replications for criteria 2-4: %.1fs)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  report(2, "asymptotic equivalences", [&] { return asymptotic_equivalences(runs); });
  report(3, "divergence case", [&] { return divergence_case(runs); });
  report(4, "variance ordering", [&] { return variance_ordering(runs); });
  report(5, "type I error and power at desk scale", power_table_reproduction);
  report(6, "design-variance gap", variance_gap);
  report(7, "coverage correction", coverage_correction);
  report(8, "determinism", determinism);

  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

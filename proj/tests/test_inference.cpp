#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "abvr/inference.hpp"

using namespace abvr;

TEST_CASE("normal cdf and quantile against high-precision values") {
  CHECK(2.0 * normal_cdf(-1.96) == doctest::Approx(0.04999579029644086827).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054236).epsilon(1e-14));
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(-40.0) >= 0.0);
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS((void)normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)normal_quantile(1.0), std::invalid_argument);
  for (double p : {1e-10, 0.01, 0.3, 0.77, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("z-test on the toy two-sample problem") {
  const auto d = validate({1, 2, 3, 5, 6, 7}, {0.3, 0.1, 0.2, 0.5, 0.4, 0.9}, {1, 1, 1, 0, 0, 0});
  const auto rows = compare_methods(d, 0.05);
  const auto& r = *rows.front().result;
  REQUIRE(rows.front().estimator == "delta0");
  CHECK(r.estimate == doctest::Approx(-4.0));
  CHECK(r.se * r.se == doctest::Approx(2.0 / 3.0));
  CHECK(r.z == doctest::Approx(-4.898979485566356196).epsilon(1e-13));
  CHECK(std::abs(r.p_two_sided - 9.633570086430945884e-7) < 1e-9);
  CHECK(r.p_two_sided == doctest::Approx(9.633570086430945884e-7).epsilon(1e-9));
  CHECK(r.rejects());
}

TEST_CASE("zero variance") {
  const auto a = ztest(0.3, 0.0, 0.05);
  CHECK(std::isinf(a.z));
  CHECK(a.z > 0);
  CHECK(a.p_two_sided == 0.0);
  const auto b = ztest(0.0, 0.0, 0.05);
  CHECK(b.z == 0.0);
  CHECK(b.p_two_sided == 1.0);
  CHECK_THROWS_AS((void)ztest(1.0, -1.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS((void)ztest(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("interval and test agree") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  for (int i = 0; i < 500; ++i) {
    const double est = z(rng);
    const double var = 0.1 + std::abs(z(rng));
    for (double alpha : {0.01, 0.05, 0.2}) {
      const auto r = ztest(est, var, alpha);
      const double margin = std::abs(std::abs(r.z) - normal_quantile(1 - alpha / 2));
      if (margin > 1e-9) CHECK(r.rejects() == !r.covers(0.0));
      CHECK(r.ci_high - r.ci_low == doctest::Approx(2 * normal_quantile(1 - alpha / 2) * r.se));
    }
  }
}

TEST_CASE("p-value decreases as |z| grows") {
  double prev = 1.0;
  for (double est = 0.0; est < 8.0; est += 0.25) {
    const auto r = ztest(est, 1.0, 0.05);
    CHECK(r.p_two_sided <= prev);
    CHECK(ztest(-est, 1.0, 0.05).p_two_sided == doctest::Approx(r.p_two_sided));
    prev = r.p_two_sided;
  }
}

TEST_CASE("comparison table layout") {
  const auto d = validate({3.1, 4.7, 2.2, 5.9, 1.4, 2.8, 0.9, 3.6},
                          {0.5, 1.8, -0.3, 2.4, 0.1, 1.2, -0.8, 1.9}, {1, 1, 1, 1, 0, 0, 0, 0});
  const auto rows = compare_methods(d, 0.05);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0].variance == "design");
  CHECK(rows[1].variance == "model");
  CHECK(rows[8].estimator == "sr");
  CHECK(rows[8].variance == "ehw-HC0");
  CHECK(rows[0].result->estimate == doctest::Approx(rows[8].result->estimate).epsilon(1e-12));
  CHECK(rows[6].result->estimate == doctest::Approx(rows[10].result->estimate).epsilon(1e-12));
  // the model-based row of the group-specific estimator carries the correction
  CHECK(rows[7].result->se > rows[6].result->se);
  CHECK(rows[0].result->se == rows[1].result->se);

  CompareOptions only;
  only.theta_methods = {ThetaMethod::GroupSpecific3};
  only.designs = {};
  only.model_based = false;
  const auto one = compare_methods(d, only);
  REQUIRE(one.size() == 1);
  CHECK(one[0].theta.has_value());
}

TEST_CASE("estimator failures are reported per row") {
  const auto d = validate({1, 2, 3, 4, 5, 6}, {2, 2, 2, 2, 2, 2}, {1, 1, 1, 0, 0, 0});
  const auto rows = compare_methods(d, 0.05);
  int ok = 0;
  for (const auto& r : rows) {
    if (r.result) {
      ++ok;
      CHECK(r.error.empty());
    } else {
      CHECK_FALSE(r.error.empty());
    }
  }
  // difference in means and SR survive
  CHECK(ok == 3);
}

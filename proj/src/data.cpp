#include "abvr/data.hpp"

#include <array>
#include <cmath>
#include <string>

namespace abvr {

ExperimentData validate(std::vector<double> y, std::vector<double> x,
                        std::vector<std::uint8_t> t) {
  if (y.size() != x.size() || y.size() != t.size()) {
    throw LengthMismatch("y, x and t must have equal length (got " + std::to_string(y.size()) +
                         ", " + std::to_string(x.size()) + ", " + std::to_string(t.size()) + ")");
  }
  std::size_t n_t = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (t[i] > 1) {
      throw NonBinaryAssignment("t[" + std::to_string(i) + "] is not 0 or 1");
    }
    if (!std::isfinite(y[i]) || !std::isfinite(x[i])) {
      throw NonFiniteValue("non-finite value at row " + std::to_string(i));
    }
    n_t += t[i];
  }
  const std::size_t n_c = y.size() - n_t;
  if (n_t < 2 || n_c < 2) {
    throw GroupTooSmall("each group needs at least 2 units (treatment " + std::to_string(n_t) +
                        ", control " + std::to_string(n_c) + ")");
  }
  return ExperimentData(std::move(y), std::move(x), std::move(t), n_t);
}

ExperimentData validate(std::vector<double> y, std::vector<double> x, std::span<const int> t) {
  std::vector<std::uint8_t> coded(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != 0 && t[i] != 1) {
      throw NonBinaryAssignment("t[" + std::to_string(i) + "] = " + std::to_string(t[i]) +
                                " is not 0 or 1");
    }
    coded[i] = static_cast<std::uint8_t>(t[i]);
  }
  return validate(std::move(y), std::move(x), std::move(coded));
}

namespace {

// Accumulates both passes for one subset of rows.
struct Accumulator {
  CompensatedSum sy, sx, syy, sxx, sxy;
  std::size_t count = 0;
  double mean_y = 0.0;
  double mean_x = 0.0;

  void first(double y, double x) {
    sy.add(y);
    sx.add(x);
    ++count;
  }
  void finish_first() {
    mean_y = sy.value() / static_cast<double>(count);
    mean_x = sx.value() / static_cast<double>(count);
  }
  void second(double y, double x) {
    const double dy = y - mean_y;
    const double dx = x - mean_x;
    syy.add(dy * dy);
    sxx.add(dx * dx);
    sxy.add(dy * dx);
  }
  [[nodiscard]] Moments result() const {
    const auto denom = static_cast<double>(count - 1);
    Moments m;
    m.size = count;
    m.mean_y = mean_y;
    m.mean_x = mean_x;
    m.var_y = syy.value() / denom;
    m.var_x = sxx.value() / denom;
    m.cov_yx = sxy.value() / denom;
    return m;
  }
};

}  // namespace

Moments compute_moments(std::span<const double> y, std::span<const double> x) {
  if (y.size() != x.size()) throw LengthMismatch("compute_moments: y and x differ in length");
  if (y.size() < 2) throw GroupTooSmall("compute_moments: need at least 2 values");
  Accumulator acc;
  for (std::size_t i = 0; i < y.size(); ++i) acc.first(y[i], x[i]);
  acc.finish_first();
  for (std::size_t i = 0; i < y.size(); ++i) acc.second(y[i], x[i]);
  return acc.result();
}

SummaryBundle summarize(const ExperimentData& data) {
  const auto y = data.y();
  const auto x = data.x();
  // index 0: control, 1: treatment
  std::array<Accumulator, 2> groups;
  Accumulator full;
  for (std::size_t i = 0; i < data.n(); ++i) {
    groups[data.t()[i]].first(y[i], x[i]);
    full.first(y[i], x[i]);
  }
  for (auto& g : groups) g.finish_first();
  full.finish_first();
  for (std::size_t i = 0; i < data.n(); ++i) {
    groups[data.t()[i]].second(y[i], x[i]);
    full.second(y[i], x[i]);
  }
  return {groups[1].result(), groups[0].result(), full.result()};
}

GroupSummary summarize_group(const ExperimentData& data, Group group) {
  const std::uint8_t wanted = group == Group::Treatment ? 1 : 0;
  Accumulator acc;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (data.t()[i] == wanted) acc.first(data.y()[i], data.x()[i]);
  }
  acc.finish_first();
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (data.t()[i] == wanted) acc.second(data.y()[i], data.x()[i]);
  }
  return acc.result();
}

FullSummary summarize_full(const ExperimentData& data) {
  return compute_moments(data.y(), data.x());
}

}  // namespace abvr

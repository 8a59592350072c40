#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "abvr/errors.hpp"

namespace abvr {

enum class Group { Treatment, Control };

/// Observed (y, x, t) triples of one experiment. Only constructible through
/// validate(), so every instance satisfies the count and finiteness invariants.
class ExperimentData {
 public:
  [[nodiscard]] std::span<const double> y() const noexcept { return y_; }
  [[nodiscard]] std::span<const double> x() const noexcept { return x_; }
  [[nodiscard]] std::span<const std::uint8_t> t() const noexcept { return t_; }

  [[nodiscard]] std::size_t n() const noexcept { return y_.size(); }
  [[nodiscard]] std::size_t n_t() const noexcept { return n_t_; }
  [[nodiscard]] std::size_t n_c() const noexcept { return n() - n_t_; }
  [[nodiscard]] double p_t() const noexcept {
    return static_cast<double>(n_t_) / static_cast<double>(n());
  }
  [[nodiscard]] double p_c() const noexcept {
    return static_cast<double>(n_c()) / static_cast<double>(n());
  }

  [[nodiscard]] bool treated(std::size_t i) const noexcept { return t_[i] != 0; }

 private:
  friend ExperimentData validate(std::vector<double> y, std::vector<double> x,
                                 std::vector<std::uint8_t> t);

  ExperimentData(std::vector<double> y, std::vector<double> x,
                 std::vector<std::uint8_t> t, std::size_t n_t)
      : y_(std::move(y)), x_(std::move(x)), t_(std::move(t)), n_t_(n_t) {}

  std::vector<double> y_;
  std::vector<double> x_;
  std::vector<std::uint8_t> t_;
  std::size_t n_t_ = 0;
};

/// Checks lengths, 0/1 assignment, finiteness and group sizes (both >= 2).
/// Throws LengthMismatch, NonBinaryAssignment, NonFiniteValue or GroupTooSmall.
[[nodiscard]] ExperimentData validate(std::vector<double> y, std::vector<double> x,
                                      std::vector<std::uint8_t> t);

/// Same as above for integer-coded assignments; any value other than 0/1 is
/// rejected with NonBinaryAssignment.
[[nodiscard]] ExperimentData validate(std::vector<double> y, std::vector<double> x,
                                      std::span<const int> t);

/// First and second moments of (y, x). Variances and covariance use the
/// (size - 1) divisor.
struct Moments {
  double mean_y = 0.0;
  double mean_x = 0.0;
  double var_y = 0.0;
  double var_x = 0.0;
  double cov_yx = 0.0;
  std::size_t size = 0;
};

using GroupSummary = Moments;
using FullSummary = Moments;

[[nodiscard]] GroupSummary summarize_group(const ExperimentData& data, Group group);
[[nodiscard]] FullSummary summarize_full(const ExperimentData& data);

/// Two-pass moments with Neumaier-compensated sums. Requires y.size() ==
/// x.size() >= 2; used for populations and transformed outcomes as well.
[[nodiscard]] Moments compute_moments(std::span<const double> y, std::span<const double> x);

/// Everything the control-variate estimators need, computed in one sweep.
struct SummaryBundle {
  GroupSummary treatment;
  GroupSummary control;
  FullSummary full;
};

[[nodiscard]] SummaryBundle summarize(const ExperimentData& data);

/// Neumaier (improved Kahan) summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace abvr

#pragma once

// The equal-variance double Gaussian on the line: density, log-derivatives and
// the weighted mass of intervals, rays and finite unions of intervals.
//
// Conventions. Centers sit at +1 and -1, the common standard deviation is a,
// and the density is normalised to total mass one:
//
//   f(x) = f1(x) + f2(x),   f1 = g(+1, a) / 2,   f2 = g(-1, a) / 2,
//
// where g(c, a) is the unit-mass normal density with mean c. Each component
// therefore carries mass 1/2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgiso {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Standard normal CDF; exactly 0 and 1 at the infinite endpoints.
inline double normal_cdf(double z) {
  if (z == -inf) return 0.0;
  if (z == inf) return 1.0;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(z).
inline double normal_tail(double z) { return normal_cdf(-z); }

/// Standard normal probability of [lo, hi], evaluated on the side of zero that
/// avoids cancellation in the tails.
inline double normal_mass(double lo, double hi) {
  if (lo >= 0.0) return normal_tail(lo) - normal_tail(hi);
  if (hi <= 0.0) return normal_cdf(hi) - normal_cdf(lo);
  return 1.0 - normal_cdf(lo) - normal_tail(hi);
}

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

/// Closed interval on the extended real line; either end may be infinite.
struct Interval {
  double lo = -inf;
  double hi = inf;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct PsiDerivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// Mass of [lo, hi] under (g(+center, sd) + g(-center, sd)) / 2.
inline double symmetric_pair_mass(double center, double sd, double lo, double hi) {
  return 0.5 * normal_mass((lo - center) / sd, (hi - center) / sd) +
         0.5 * normal_mass((lo + center) / sd, (hi + center) / sd);
}

class DoubleGaussian {
 public:
  explicit DoubleGaussian(double variance) : variance_(variance), sd_(std::sqrt(variance)) {
    if (!(variance > 0.0) || !std::isfinite(variance))
      throw std::invalid_argument("DoubleGaussian: variance must be positive and finite");
  }

  [[nodiscard]] double variance() const noexcept { return variance_; }
  [[nodiscard]] double stddev() const noexcept { return sd_; }

  /// Unit-mass normal density with mean `center` and the shared deviation.
  [[nodiscard]] double gaussian(double x, double center) const noexcept {
    return normal_pdf((x - center) / sd_) / sd_;
  }

  /// f1 = g(+1, a) / 2, the right component (mass 1/2).
  [[nodiscard]] double right_component(double x) const noexcept { return 0.5 * gaussian(x, 1.0); }
  /// f2 = g(-1, a) / 2, the left component (mass 1/2).
  [[nodiscard]] double left_component(double x) const noexcept { return 0.5 * gaussian(x, -1.0); }

  [[nodiscard]] double density(double x) const noexcept {
    const double u = x - 1.0;
    const double v = x + 1.0;
    const double two_var = 2.0 * variance_;
    return (std::exp(-u * u / two_var) + std::exp(-v * v / two_var)) * norm_;
  }

  /// psi = log f, written as a log-sum-exp so that it stays finite far out in
  /// the tails where f itself underflows.
  [[nodiscard]] double log_density(double x) const noexcept {
    const double ax = std::abs(x);
    return -(x * x + 1.0) / (2.0 * variance_) + ax / variance_ +
           std::log1p(std::exp(-2.0 * ax / variance_)) + std::log(norm_);
  }

  [[nodiscard]] PsiDerivatives log_density_derivatives(double x) const noexcept {
    const double y = x / variance_;
    const double th = std::tanh(y);
    const double ch = std::cosh(y);
    const double sech2 = std::isfinite(ch) ? 1.0 / (ch * ch) : 0.0;
    const double a4 = variance_ * variance_;
    return {(-x + th) / variance_, (-variance_ + sech2) / a4, -2.0 * sech2 * th / (a4 * variance_)};
  }

  [[nodiscard]] double psi_prime(double x) const noexcept {
    return (-x + std::tanh(x / variance_)) / variance_;
  }

  [[nodiscard]] double psi_second(double x) const noexcept {
    return log_density_derivatives(x).second;
  }

  /// Mass of (-inf, x].
  [[nodiscard]] double cdf(double x) const { return interval_mass(-inf, x); }

  /// Mass of [s, t]; s may be -inf and t may be +inf.
  [[nodiscard]] double interval_mass(double s, double t) const {
    if (std::isnan(s) || std::isnan(t) || s > t)
      throw std::invalid_argument("interval_mass: requires s <= t");
    return symmetric_pair_mass(1.0, sd_, s, t);
  }

  [[nodiscard]] double interval_mass(const Interval& i) const { return interval_mass(i.lo, i.hi); }

  /// Mass of a finite union of intervals. Intervals may touch but not overlap.
  [[nodiscard]] double region_mass(std::span<const Interval> region) const;

 private:
  double variance_;
  double sd_;
  double norm_ = 1.0 / (2.0 * sd_ * std::sqrt(2.0 * std::numbers::pi));
};

/// Throws unless the intervals are well ordered and pairwise non-overlapping.
inline void check_disjoint(std::span<const Interval> region) {
  std::vector<Interval> sorted(region.begin(), region.end());
  for (const auto& i : sorted)
    if (std::isnan(i.lo) || std::isnan(i.hi) || i.lo > i.hi)
      throw std::invalid_argument("region: interval with lo > hi");
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k].lo < sorted[k - 1].hi)
      throw std::invalid_argument("region: overlapping intervals");
}

inline double DoubleGaussian::region_mass(std::span<const Interval> region) const {
  check_disjoint(region);
  double total = 0.0;
  for (const auto& i : region) total += interval_mass(i);
  return total;
}

/// Mass of the dilated region b*r under the double Gaussian with centers +-b and
/// deviation a*b. Mass is scale invariant, so this equals d.region_mass(r).
inline double scaled_density_mass(double b, const DoubleGaussian& d, std::span<const Interval> region) {
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("scaled_density_mass: scale must be positive");
  check_disjoint(region);
  const double sd = d.stddev() * b;
  double total = 0.0;
  for (const auto& i : region) total += symmetric_pair_mass(b, sd, b * i.lo, b * i.hi);
  return total;
}

/// Density of the dilated double Gaussian (centers +-b, deviation a*b) at x.
inline double scaled_density(double b, const DoubleGaussian& d, double x) {
  const double sd = d.stddev() * b;
  return 0.5 * (normal_pdf((x - b) / sd) + normal_pdf((x + b) / sd)) / sd;
}

}  // namespace dgiso

#pragma once

// The double Gaussian in the plane, f(x, y) = f_line(x) g(y) with g the unit
// mass N(0, a^2) density: generalized curvature of straight lines and the
// vertical-versus-horizontal half-plane comparison.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include "dgiso/density.hpp"
#include "dgiso/line.hpp"
#include "dgiso/quadrature.hpp"
#include "dgiso/report.hpp"

namespace dgiso {

class PlaneDensity {
 public:
  explicit PlaneDensity(double variance) : line_(variance) {}

  [[nodiscard]] double variance() const noexcept { return line_.variance(); }
  [[nodiscard]] const DoubleGaussian& line() const noexcept { return line_; }

  /// Unit-mass N(0, a^2) density in y.
  [[nodiscard]] double y_density(double y) const noexcept { return line_.gaussian(y, 0.0); }

  [[nodiscard]] double density(double x, double y) const noexcept { return line_.density(x) * y_density(y); }

  [[nodiscard]] double log_density(double x, double y) const noexcept {
    return line_.log_density(x) - y * y / (2.0 * variance()) - std::log(line_.stddev() * std::sqrt(2.0 * std::numbers::pi));
  }

  /// Gradient of psi = log f.
  [[nodiscard]] std::pair<double, double> grad_psi(double x, double y) const noexcept {
    return {line_.psi_prime(x), -y / variance()};
  }

 private:
  DoubleGaussian line_;
};

struct PlaneLine {
  enum class Kind { Vertical, Horizontal, Sloped };
  Kind kind = Kind::Horizontal;
  double offset = 0.0;  ///< x = b, y = b, or intercept b of y = c x + b
  double slope = 0.0;   ///< c, sloped lines only

  static PlaneLine vertical(double b) { return {Kind::Vertical, b, 0.0}; }
  static PlaneLine horizontal(double b) { return {Kind::Horizontal, b, 0.0}; }
  static PlaneLine sloped(double c, double b) {
    if (!(c != 0.0) || !std::isfinite(c)) throw std::invalid_argument("PlaneLine: slope must be finite and non-zero");
    return {Kind::Sloped, b, c};
  }
};

/// Generalized curvature -grad psi . n with n the unit normal (1, 0), (0, 1) or
/// (-c, 1)/sqrt(1 + c^2). `t` parametrises the line: the y coordinate for a
/// vertical line, the x coordinate otherwise.
inline double line_generalized_curvature(const PlaneDensity& p, const PlaneLine& l, double t) {
  switch (l.kind) {
    case PlaneLine::Kind::Vertical: return -p.grad_psi(l.offset, t).first;
    case PlaneLine::Kind::Horizontal: return -p.grad_psi(t, l.offset).second;
    case PlaneLine::Kind::Sloped: {
      const auto [gx, gy] = p.grad_psi(t, l.slope * t + l.offset);
      return -(-l.slope * gx + gy) / std::sqrt(1.0 + l.slope * l.slope);
    }
  }
  return 0.0;
}

/// kappa(1) - kappa(0) along y = c x + b, which is c tanh(1/a^2) / (a^2 sqrt(1 + c^2)).
inline double sloped_curvature_difference(double a2, double c) {
  return c * std::tanh(1.0 / a2) / (a2 * std::sqrt(1.0 + c * c));
}

/// Horizontal and vertical lines have constant generalized curvature (b / a^2
/// and (b - tanh(b / a^2)) / a^2); a sloped line does not, since its curvature
/// at x = 1 and x = 0 differ by c tanh(1/a^2) / (a^2 sqrt(1 + c^2)) != 0.
inline VerificationReport stationary_lines_check(const PlaneDensity& p, int sloped_samples = 20,
                                                 int line_samples = 100, double tol = 1e-12,
                                                 std::uint64_t seed = 20150701) {
  VerificationReport r;
  ReportTimer timer(r);
  r.id = "stationary_lines";
  const double a2 = p.variance();
  r.parameters["a2"] = a2;
  r.parameters["sloped_samples"] = sloped_samples;
  r.parameters["line_samples"] = line_samples;
  r.tolerances["curvature"] = tol;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope_dist(0.1, 3.0), offset_dist(-2.0, 2.0);
  std::bernoulli_distribution flip(0.5);
  double worst_sloped = 0.0, smallest_gap = inf;
  for (int i = 0; i < sloped_samples; ++i) {
    const double c = flip(rng) ? slope_dist(rng) : -slope_dist(rng);
    const double b = offset_dist(rng);
    const PlaneLine l = PlaneLine::sloped(c, b);
    const double diff = line_generalized_curvature(p, l, 1.0) - line_generalized_curvature(p, l, 0.0);
    const double expected = sloped_curvature_difference(a2, c);
    worst_sloped = std::max(worst_sloped, std::abs(diff - expected) / std::max(1.0, std::abs(expected)));
    smallest_gap = std::min(smallest_gap, std::abs(diff));
  }

  double worst_h = 0.0, worst_v = 0.0;
  double nonzero_constant = 0.0;
  for (int i = 0; i < line_samples; ++i) {
    const double b = -2.0 + 4.0 * i / (line_samples - 1);
    const PlaneLine h = PlaneLine::horizontal(b);
    const PlaneLine v = PlaneLine::vertical(b);
    const double h_expected = b / a2;
    const double v_expected = (b - std::tanh(b / a2)) / a2;
    nonzero_constant = std::max({nonzero_constant, std::abs(h_expected), std::abs(v_expected)});
    for (int j = 0; j < line_samples; ++j) {
      const double t = -5.0 + 10.0 * j / (line_samples - 1);
      worst_h = std::max(worst_h, std::abs(line_generalized_curvature(p, h, t) - h_expected));
      worst_v = std::max(worst_v, std::abs(line_generalized_curvature(p, v, t) - v_expected));
    }
  }

  r.witnesses["worst_sloped_difference_error"] = worst_sloped;
  r.witnesses["smallest_sloped_difference"] = smallest_gap;
  r.witnesses["worst_horizontal_deviation"] = worst_h;
  r.witnesses["worst_vertical_deviation"] = worst_v;
  // The constant curvatures are generally non-zero.
  r.witnesses["largest_constant_curvature"] = nonzero_constant;
  r.require(worst_sloped <= tol, "sloped curvature difference disagrees with c tanh(1/a^2) / (a^2 sqrt(1 + c^2))");
  r.require(smallest_gap > 0.0, "a sloped line has equal curvature at x = 0 and x = 1");
  r.require(worst_h <= tol, "horizontal line curvature not constant b / a^2");
  r.require(worst_v <= tol, "vertical line curvature not constant (b - tanh(b / a^2)) / a^2");
  return r;
}

struct HalfPlane {
  double mass = 0.0;
  double perimeter = 0.0;
};

/// {x > b}: the same numbers as the ray [b, inf) on the double Gaussian line.
inline HalfPlane vertical_halfplane(const PlaneDensity& p, double b) {
  return {p.line().interval_mass(b, inf), p.line().density(b)};
}

/// {y > c}: the unit-mass N(0, a^2) tail beyond c and its density at c.
inline HalfPlane horizontal_halfplane(const PlaneDensity& p, double c) {
  const double a = p.line().stddev();
  return {normal_tail(c / a), normal_pdf(c / a) / a};
}

/// 2-D adaptive Simpson estimate of the mass of {x > b}, truncated to
/// |x| <= 1 + 10a, |y| <= 10a.
inline double vertical_halfplane_quadrature(const PlaneDensity& p, double b, double tol = 1e-9) {
  const double a = p.line().stddev();
  const double X = 1.0 + 10.0 * a, Y = 10.0 * a;
  const double lo = std::max(b, -X);
  if (lo >= X) return 0.0;
  return adaptive_simpson_2d([&](double x, double y) { return p.density(x, y); }, lo, X, -Y, Y, tol);
}

/// 2-D adaptive Simpson estimate of the mass of {y > c}, same truncation box.
inline double horizontal_halfplane_quadrature(const PlaneDensity& p, double c, double tol = 1e-9) {
  const double a = p.line().stddev();
  const double X = 1.0 + 10.0 * a, Y = 10.0 * a;
  const double lo = std::max(c, -Y);
  if (lo >= Y) return 0.0;
  return adaptive_simpson_2d([&](double y, double x) { return p.density(x, y); }, lo, Y, -X, X, tol);
}

struct LineComparison {
  double A = 0.0;
  double b_vertical = 0.0;
  double c_horizontal = 0.0;
  double perim_vertical = 0.0;
  double perim_horizontal = 0.0;
  [[nodiscard]] double margin() const { return perim_horizontal - perim_vertical; }
};

inline LineComparison line_comparison(const PlaneDensity& p, double A) {
  if (!(A > 0.0 && A < 0.5)) throw std::invalid_argument("compare_lines: mass must lie in (0, 1/2)");
  LineComparison out;
  out.A = A;
  out.b_vertical = ray_for_mass(p.line(), A).points.front();
  out.c_horizontal = p.line().stddev() * upper_tail_quantile(A);
  out.perim_vertical = vertical_halfplane(p, out.b_vertical).perimeter;
  out.perim_horizontal = horizontal_halfplane(p, out.c_horizontal).perimeter;
  return out;
}

/// Vertical half-plane of mass A is strictly cheaper than the horizontal one.
inline VerificationReport compare_lines(const PlaneDensity& p, double A, const Tolerances& tol = {}) {
  VerificationReport r;
  ReportTimer timer(r);
  r.id = "vertical_vs_horizontal";
  r.parameters["a2"] = p.variance();
  r.parameters["A"] = A;
  stamp(r, tol);
  const LineComparison cmp = line_comparison(p, A);
  const double mass_v = vertical_halfplane(p, cmp.b_vertical).mass;
  const double mass_h = horizontal_halfplane(p, cmp.c_horizontal).mass;
  r.witnesses["b_vertical"] = cmp.b_vertical;
  r.witnesses["c_horizontal"] = cmp.c_horizontal;
  r.witnesses["perim_vertical"] = cmp.perim_vertical;
  r.witnesses["perim_horizontal"] = cmp.perim_horizontal;
  r.witnesses["margin"] = cmp.margin();
  r.witnesses["mass_vertical"] = mass_v;
  r.witnesses["mass_horizontal"] = mass_h;
  r.require(std::abs(mass_v - A) <= tol.mass && std::abs(mass_h - A) <= tol.mass, "half-plane mass misses A");
  r.require(cmp.margin() > tol.margin, "vertical line is not strictly cheaper than horizontal");
  return r;
}

/// Cost of splitting mass A into rays [r1, inf) and [r2, inf) on two copies of
/// the mass-1/2 Gaussian line, with mass m on the first copy.
inline double ray_split_cost(double a, double A, double m) {
  auto cost = [a](double mass) {
    if (mass <= 0.0) return 0.0;
    const double z = upper_tail_quantile(2.0 * mass);
    return 0.5 * normal_pdf(z) / a;
  };
  return cost(m) + cost(A - m);
}

/// On two copies of the mass-1/2 Gaussian line, the symmetric split of A is
/// the most expensive and the cost falls as the split becomes lopsided, down to
/// a single ray on one copy. The double Gaussian ray is one such lopsided split.
inline VerificationReport ray_split_check(const PlaneDensity& p, double A, int samples = 200) {
  if (!(A > 0.0 && A < 0.5)) throw std::invalid_argument("ray_split_check: mass must lie in (0, 1/2)");
  VerificationReport r;
  ReportTimer timer(r);
  r.id = "ray_split";
  r.parameters["a2"] = p.variance();
  r.parameters["A"] = A;
  r.parameters["samples"] = samples;
  const double a = p.line().stddev();

  bool monotone = true;
  double prev = ray_split_cost(a, A, 0.0);
  for (int i = 1; i <= samples; ++i) {
    const double m = 0.5 * A * i / samples;
    const double c = ray_split_cost(a, A, m);
    if (!(c > prev)) monotone = false;
    prev = c;
  }
  const double symmetric = ray_split_cost(a, A, 0.5 * A);
  const double single = ray_split_cost(a, A, 0.0);
  const double b = ray_for_mass(p.line(), A).points.front();
  const double m_right = 0.5 * normal_tail((b - 1.0) / a);
  const double split_cost = ray_split_cost(a, A, m_right);
  const double ray_cost = p.line().density(b);

  r.witnesses["symmetric_cost"] = symmetric;
  r.witnesses["single_copy_cost"] = single;
  r.witnesses["double_gaussian_split_mass"] = m_right;
  r.witnesses["double_gaussian_split_cost"] = split_cost;
  r.witnesses["double_gaussian_ray_cost"] = ray_cost;
  r.witnesses["horizontal_cost"] = horizontal_halfplane(p, a * upper_tail_quantile(A)).perimeter;
  r.require(monotone, "split cost not increasing towards the symmetric split");
  r.require(std::abs(split_cost - ray_cost) <= 1e-12 * std::max(1.0, ray_cost),
            "double Gaussian ray is not the corresponding split");
  r.require(split_cost < symmetric, "lopsided split not cheaper than symmetric split");
  return r;
}

}  // namespace dgiso

#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's root finder, quadrature or CDF.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

/// Plain bisection; the bracket must straddle a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (std::signbit(flo) == std::signbit(f(hi))) throw std::domain_error("bisect: no sign change");
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Adaptive 61-point Gauss-Kronrod on a finite interval.
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

/// Density written out directly from the formula, no shared code.
inline double density(double a2, double x) {
  const double a = std::sqrt(a2);
  return (std::exp(-(x - 1) * (x - 1) / (2 * a2)) + std::exp(-(x + 1) * (x + 1) / (2 * a2))) /
         (2 * a * std::sqrt(2 * std::numbers::pi));
}

/// Mass of [s, t] by quadrature, restricted to where the density is visible.
inline double mass(double a2, double s, double t) {
  const double reach = 1.0 + 40.0 * std::sqrt(a2);
  s = std::max(s, -reach);
  t = std::min(t, reach);
  if (s >= t) return 0.0;
  // Split at the centers so the peaks sit on panel boundaries.
  std::vector<double> cuts{s};
  for (double p : {-1.0, 0.0, 1.0})
    if (p > s && p < t) cuts.push_back(p);
  cuts.push_back(t);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate([a2](double x) { return density(a2, x); }, cuts[i], cuts[i + 1]);
  return total;
}

/// Boost's standard normal CDF (its own erfc implementation).
inline double normal_cdf(double z) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), z);
}

/// Mass of [s, t] from Boost's normal CDF; either end may be infinite.
inline double mass_by_cdf(double a2, double s, double t) {
  const double a = std::sqrt(a2);
  auto F = [a](double x) {
    if (std::isinf(x)) return x < 0 ? 0.0 : 1.0;
    return 0.5 * normal_cdf((x - 1.0) / a) + 0.5 * normal_cdf((x + 1.0) / a);
  };
  return F(t) - F(s);
}

inline mp log_density_mp(double a2_d, const mp& x) {
  const mp a2 = a2_d;
  const mp a = sqrt(a2);
  const mp two_pi = 2 * boost::math::constants::pi<mp>();
  return log((exp(-(x - 1) * (x - 1) / (2 * a2)) + exp(-(x + 1) * (x + 1) / (2 * a2))) / (2 * a * sqrt(two_pi)));
}

inline double density_mp(double a2, double x) { return static_cast<double>(exp(log_density_mp(a2, mp(x)))); }

struct FiniteDifferences {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// Central differences of log f in 50-digit arithmetic with step h.
inline FiniteDifferences log_density_differences(double a2, double x_d, double h_d) {
  const mp x = x_d, h = h_d;
  auto L = [&](const mp& y) { return log_density_mp(a2, y); };
  const mp l2m = L(x - 2 * h), l1m = L(x - h), l0 = L(x), l1p = L(x + h), l2p = L(x + 2 * h);
  FiniteDifferences out;
  out.first = static_cast<double>((l1p - l1m) / (2 * h));
  out.second = static_cast<double>((l1p - 2 * l0 + l1m) / (h * h));
  out.third = static_cast<double>((l2p - 2 * l1p + 2 * l1m - l2m) / (2 * h * h * h));
  return out;
}

/// Gradient of log of the plane density in 50-digit arithmetic by central
/// differences, dotted with the unit normal (nx, ny); returns -grad psi . n.
inline double plane_curvature_mp(double a2_d, double x_d, double y_d, double nx, double ny) {
  const mp a2 = a2_d, x = x_d, y = y_d, h = mp("1e-20");
  const mp a = sqrt(a2);
  const mp two_pi = 2 * boost::math::constants::pi<mp>();
  auto P = [&](const mp& u, const mp& v) {
    return log((exp(-(u - 1) * (u - 1) / (2 * a2)) + exp(-(u + 1) * (u + 1) / (2 * a2))) / (2 * a * sqrt(two_pi)) *
               exp(-v * v / (2 * a2)) / (a * sqrt(two_pi)));
  };
  const mp gx = (P(x + h, y) - P(x - h, y)) / (2 * h);
  const mp gy = (P(x, y + h) - P(x, y - h)) / (2 * h);
  return static_cast<double>(-(gx * nx + gy * ny));
}

}  // namespace oracle

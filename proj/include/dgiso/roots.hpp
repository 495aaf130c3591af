#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

#include <boost/math/policies/policy.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace dgiso {

/// Bracketed scalar root finder (TOMS 748: bisection safeguarded by secant and
/// inverse cubic steps). The bracket [lo, hi] must contain a sign change.
///
/// Terminates once the bracket is narrower than `abs_tol` or has collapsed to a
/// few ulps, and returns whichever end of the final bracket has the smaller
/// residual. Throws std::domain_error if the endpoints do not straddle a root.
template <class F>
double find_root(F&& f, double lo, double hi, double abs_tol = 1e-14,
                 std::uintmax_t max_iter = 200) {
  if (!(lo <= hi)) throw std::invalid_argument("find_root: lo > hi");
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw std::domain_error("find_root: bracket does not straddle a root");

  auto done = [abs_tol](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(b - a) <=
           std::max(abs_tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
  };
  using namespace boost::math::policies;
  using quiet = policy<evaluation_error<ignore_error>>;
  std::uintmax_t iters = max_iter;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters, quiet());
  if (a == b) return a;
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

/// Grows `hi` geometrically away from `lo` until f changes sign, so that a
/// decreasing (or increasing) tail can be bracketed without a hard-coded limit.
template <class F>
double expand_right(F&& f, double lo, double hi, int max_doublings = 60) {
  const bool lo_negative = std::signbit(f(lo));
  double step = std::max(hi - lo, 1.0);
  for (int i = 0; i < max_doublings; ++i) {
    if (std::signbit(f(hi)) != lo_negative || f(hi) == 0.0) return hi;
    step *= 2.0;
    hi = lo + step;
  }
  throw std::domain_error("expand_right: no sign change found");
}

}  // namespace dgiso

#pragma once

// Adaptive Simpson quadrature in one dimension and its tensor-product nesting
// in two. Used to cross-check closed-form masses of plane regions.

#include <cmath>
#include <stdexcept>

namespace dgiso {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on a finite interval with Richardson correction. The
/// interval is first cut into `pieces` panels so that narrow peaks are seen.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40, int pieces = 16) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("adaptive_simpson: finite limits only");
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, tol, max_depth, pieces);
  double total = 0.0;
  const double width = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + width * i;
    const double hi = i + 1 == pieces ? b : a + width * (i + 1);
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / pieces, max_depth);
  }
  return total;
}

/// Integral of f(x, y) over [x0, x1] x [y0, y1], inner integral in y.
template <class F>
double adaptive_simpson_2d(F&& f, double x0, double x1, double y0, double y1, double tol = 1e-9) {
  auto inner = [&](double x) { return adaptive_simpson([&](double y) { return f(x, y); }, y0, y1, tol); };
  return adaptive_simpson(inner, x0, x1, tol);
}

}  // namespace dgiso

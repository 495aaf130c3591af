#pragma once

// Stationary boundaries on the double Gaussian line.
//
// A finite boundary is stationary when its generalized curvature is the same at
// every point. On the line the generalized curvature at a boundary point p is
// -psi'(p) when the enclosed region lies to the right of p and +psi'(p) when it
// lies to the left. For a^2 < 1, psi' is increasing on [0, c] and decreasing
// on [c, inf) (c the inflection point), so each level |psi'| = kappa has at most
// three positive solutions s <= c < t < u with psi'(s) = psi'(t) = -psi'(u).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dgiso/density.hpp"
#include "dgiso/roots.hpp"

namespace dgiso {

/// Inflection abscissa c = a^2 arccosh(1/a) of psi on [0, inf). Requires a^2 <= 1.
inline double inflection_point(const DoubleGaussian& d) {
  if (d.variance() > 1.0)
    throw std::domain_error("inflection_point: no inflection for variance > 1 (psi'' < 0 away from 0)");
  return d.variance() * std::acosh(1.0 / d.stddev());
}

/// Unique positive zero of psi', i.e. the solution of x = tanh(x / a^2) in (c, 1].
inline double psi_prime_zero_right(const DoubleGaussian& d) {
  if (d.variance() >= 1.0)
    throw std::domain_error("psi_prime_zero_right: no positive zero of psi' for variance >= 1");
  const double a2 = d.variance();
  auto g = [a2](double x) { return x - std::tanh(x / a2); };
  return find_root(g, inflection_point(d), 1.0, 0.0);
}

struct InflectionData {
  double c = 0.0;        ///< inflection point
  double d = 0.0;        ///< positive zero of psi'
  double b_match = 0.0;  ///< the point beyond d where psi returns to psi(c)
};

inline InflectionData inflection_data(const DoubleGaussian& d) {
  InflectionData out;
  out.c = inflection_point(d);
  out.d = psi_prime_zero_right(d);
  const double target = d.log_density(out.c);
  auto h = [&](double x) { return d.log_density(x) - target; };
  const double hi = expand_right(h, out.d, out.d + 1.0 + 8.0 * d.stddev());
  out.b_match = find_root(h, out.d, hi, 0.0);
  return out;
}

namespace detail {

inline double far_bracket(const DoubleGaussian& d, double kappa) {
  // psi'(x) <= (1 - x) / a^2 for x >= 0, so |psi'| exceeds kappa beyond this.
  return std::max(1.0 + 8.0 * d.stddev(), 2.0 + kappa * d.variance());
}

}  // namespace detail

/// All solutions of |psi'(x)| = kappa, sorted ascending. Requires a^2 < 1.
inline std::vector<double> level_set_abs_psi_prime(const DoubleGaussian& d, double kappa) {
  if (d.variance() >= 1.0)
    throw std::domain_error("level_set_abs_psi_prime: requires variance < 1");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("level_set_abs_psi_prime: kappa must be finite and >= 0");

  const double c = inflection_point(d);
  const double peak = d.psi_prime(c);
  const double hi = detail::far_bracket(d, kappa);
  auto above = [&](double level) { return [&d, level](double x) { return d.psi_prime(x) - level; }; };

  std::vector<double> positive;
  if (kappa == 0.0) {
    positive = {0.0, psi_prime_zero_right(d)};
  } else {
    if (kappa <= peak) {
      positive.push_back(find_root(above(kappa), 0.0, c, 0.0));
      positive.push_back(find_root(above(kappa), c, hi, 0.0));
    }
    positive.push_back(find_root(above(-kappa), c, hi, 0.0));
  }
  std::sort(positive.begin(), positive.end());
  positive.erase(std::unique(positive.begin(), positive.end(),
                             [](double l, double r) { return std::abs(l - r) <= 1e-12; }),
                 positive.end());

  std::vector<double> all;
  for (double x : positive) {
    all.push_back(x);
    if (x != 0.0) all.push_back(-x);
  }
  std::sort(all.begin(), all.end());
  return all;
}

/// Generalized curvature of a point boundary. `inward_sign` is +1 when the
/// enclosed region lies to the right of x and -1 when it lies to the left; the
/// right end q of an interval [p, q] gets psi'(q) and the left end -psi'(p).
inline double generalized_curvature_at(const DoubleGaussian& d, double x, int inward_sign) {
  if (inward_sign != 1 && inward_sign != -1)
    throw std::invalid_argument("generalized_curvature_at: inward_sign must be +1 or -1");
  return -static_cast<double>(inward_sign) * d.psi_prime(x);
}

enum class CandidateTag {
  SingleRay,           ///< one point enclosing a ray
  IntervalRight,       ///< bounded interval with both ends on one side of 0
  IntervalStraddling,  ///< bounded interval containing 0
  ThreePoint,          ///< {s, -s, t}: symmetric interval plus a ray or interval
  Other,               ///< any other stationary shape
};

inline std::string_view to_string(CandidateTag t) {
  switch (t) {
    case CandidateTag::SingleRay: return "single_ray";
    case CandidateTag::IntervalRight: return "interval_one_side";
    case CandidateTag::IntervalStraddling: return "interval_straddling";
    case CandidateTag::ThreePoint: return "three_point";
    case CandidateTag::Other: return "other";
  }
  return "?";
}

/// Region bounded by sorted points. With `left_unbounded` the region starts
/// with (-inf, p0]; otherwise it starts with [p0, ...).
inline std::vector<Interval> region_from_points(std::span<const double> points, bool left_unbounded) {
  std::vector<Interval> region;
  bool inside = left_unbounded;
  double start = -inf;
  for (double p : points) {
    if (inside) region.push_back({start, p});
    else start = p;
    inside = !inside;
  }
  if (inside) region.push_back({start, inf});
  return region;
}

struct Candidate {
  CandidateTag tag = CandidateTag::Other;
  std::vector<double> points;
  std::vector<Interval> region;
  bool left_unbounded = false;
  double mass = 0.0;
  double curvature = 0.0;        ///< common generalized curvature
  bool has_core_point = false;   ///< some point lies in [-c, c]
  int concave_points = 0;        ///< points with |p| > c, where psi'' < 0

  /// A shape outside the four classified families with a point in [-c, c] and
  /// at most one point outside it. Two points outside [-c, c] already make the
  /// second variation negative, so only these would contradict the
  /// classification of isoperimetric boundaries.
  [[nodiscard]] bool anomalous() const {
    return tag == CandidateTag::Other && has_core_point && concave_points <= 1;
  }
};

inline CandidateTag classify_shape(std::span<const double> points, bool left_unbounded) {
  constexpr double pair_tol = 1e-9;
  switch (points.size()) {
    case 1: return CandidateTag::SingleRay;
    case 2:
      if (left_unbounded) return CandidateTag::Other;  // two rays
      if (points[0] >= 0.0 || points[1] <= 0.0) return CandidateTag::IntervalRight;
      return CandidateTag::IntervalStraddling;
    case 3:
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
          if (std::abs(points[i] + points[j]) <= pair_tol && points[j] > 0.0) return CandidateTag::ThreePoint;
      return CandidateTag::Other;
    default: return CandidateTag::Other;
  }
}

struct ClassifyOptions {
  int seeds = 512;
  double dedupe_tol = 1e-6;
  double mass_tol = 1e-9;
  double curvature_tol = 1e-9;
};

struct LevelPoints {
  double s = 0.0;
  double t = 0.0;
  double u = 0.0;
};

/// The three nonnegative points sharing |psi'| with a seed s in [0, c]:
/// psi'(t) = psi'(s) with t >= c and psi'(u) = -psi'(s) with u >= t.
inline LevelPoints level_points_from_seed(const DoubleGaussian& d, double s, double c) {
  const double k = d.psi_prime(s);
  const double hi = detail::far_bracket(d, std::abs(k));
  LevelPoints lp{s, c, c};
  auto same = [&](double x) { return d.psi_prime(x) - k; };
  auto opposite = [&](double x) { return d.psi_prime(x) + k; };
  if (same(c) > 0.0) lp.t = find_root(same, c, hi, 0.0);
  if (opposite(c) > 0.0) lp.u = find_root(opposite, c, hi, 0.0);
  return lp;
}

namespace detail {

inline bool near_duplicate(const Candidate& a, const Candidate& b, double tol) {
  if (a.points.size() != b.points.size() || a.left_unbounded != b.left_unbounded) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (std::abs(a.points[i] - b.points[i]) > tol) return false;
  return true;
}

inline bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.tag != b.tag) return a.tag < b.tag;
  if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (a.points[i] != b.points[i]) return a.points[i] < b.points[i];
  return a.left_unbounded < b.left_unbounded;
}

/// Builds a candidate and re-verifies the mass and curvature constraints.
/// Returns false when the configuration is degenerate or violates either one.
inline bool make_candidate(const DoubleGaussian& d, std::vector<double> points, bool left_unbounded,
                           double target, double core, const ClassifyOptions& opt, Candidate& out) {
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] - points[i - 1] <= 1e-9) return false;
  out.points = std::move(points);
  out.left_unbounded = left_unbounded;
  out.region = region_from_points(out.points, left_unbounded);
  out.mass = d.region_mass(out.region);
  if (std::abs(out.mass - target) > opt.mass_tol) return false;

  bool inside = left_unbounded;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const double k = generalized_curvature_at(d, out.points[i], inside ? -1 : 1);
    if (i == 0) out.curvature = k;
    else if (std::abs(k - out.curvature) > opt.curvature_tol) return false;
    inside = !inside;
  }
  out.has_core_point = false;
  out.concave_points = 0;
  for (double p : out.points) {
    if (std::abs(p) <= core + 1e-12) out.has_core_point = true;
    else ++out.concave_points;
  }
  out.tag = classify_shape(out.points, left_unbounded);
  return true;
}

inline void insert_unique(std::vector<Candidate>& list, Candidate c, double tol) {
  for (const auto& existing : list)
    if (near_duplicate(existing, c, tol)) return;
  list.push_back(std::move(c));
}

inline void push_rays(const DoubleGaussian& d, double target, double core, const ClassifyOptions& opt,
                      std::vector<Candidate>& out) {
  auto tail = [&](double x) { return d.interval_mass(x, inf) - target; };
  const double reach = 1.0 + 40.0 * d.stddev();
  const double b = target == 0.5 ? 0.0 : find_root(tail, -reach, reach, 0.0);
  Candidate c;
  if (make_candidate(d, {b}, false, target, core, opt, c)) insert_unique(out, c, opt.dedupe_tol);
  if (make_candidate(d, {-b}, true, target, core, opt, c)) insert_unique(out, c, opt.dedupe_tol);
}

/// Regime a^2 >= 1: psi' is strictly decreasing, every level set is {-x, x},
/// and the only multi-point stationary shapes are [-x, x] and its complement.
inline std::vector<Candidate> classify_monotone(const DoubleGaussian& d, double target,
                                                const ClassifyOptions& opt) {
  std::vector<Candidate> out;
  push_rays(d, target, 0.0, opt, out);
  const double reach = 1.0 + 40.0 * d.stddev();
  auto inner = [&](double x) { return d.interval_mass(-x, x) - target; };
  auto outer = [&](double x) { return 2.0 * d.interval_mass(x, inf) - target; };
  Candidate c;
  const double xi = find_root(inner, 0.0, reach, 0.0);
  if (make_candidate(d, {-xi, xi}, false, target, 0.0, opt, c)) insert_unique(out, c, opt.dedupe_tol);
  const double xo = find_root(outer, 0.0, reach, 0.0);
  if (make_candidate(d, {-xo, xo}, true, target, 0.0, opt, c)) insert_unique(out, c, opt.dedupe_tol);
  return out;
}

}  // namespace detail

/// Enumerates stationary boundaries enclosing mass `target` in (0, 1/2).
///
/// For a^2 < 1 each seed s in [0, c] fixes a level kappa = psi'(s) with the six
/// level points {+-s, +-t, +-u}. Every subset whose signed curvature can be made
/// constant (signs of psi' alternate along the sorted points) defines two
/// complementary regions whose mass is a continuous function of s. Sign changes
/// of mass - target between neighbouring seeds are refined by root finding.
/// The ray and its mirror are always included. Shapes outside the four
/// classified families are returned with tag Other.
///
/// For a^2 >= 1 the level sets are symmetric pairs and the enumeration is exact.
inline std::vector<Candidate> classify_candidates(const DoubleGaussian& d, double target,
                                                  const ClassifyOptions& opt = {}) {
  if (!(target > 0.0 && target < 0.5))
    throw std::invalid_argument("classify_candidates: target mass must lie in (0, 1/2)");
  if (opt.seeds < 2) throw std::invalid_argument("classify_candidates: need at least two seeds");

  std::vector<Candidate> out;
  if (d.variance() >= 1.0) {
    out = detail::classify_monotone(d, target, opt);
  } else {
    const double c = inflection_point(d);
    detail::push_rays(d, target, c, opt, out);

    // Level points in sorted order: -u, -t, -s, s, t, u, with psi' signs + - - + + -.
    constexpr std::array<int, 6> sign = {+1, -1, -1, +1, +1, -1};
    auto points_at = [&](double s) {
      const LevelPoints lp = level_points_from_seed(d, s, c);
      return std::array<double, 6>{-lp.u, -lp.t, -lp.s, lp.s, lp.t, lp.u};
    };

    std::vector<unsigned> masks;
    for (unsigned mask = 1; mask < 64; ++mask) {
      int prev = 0;
      bool alternating = true;
      for (int i = 0; i < 6; ++i) {
        if (!(mask & (1u << i))) continue;
        if (prev != 0 && sign[i] == prev) alternating = false;
        prev = sign[i];
      }
      if (alternating) masks.push_back(mask);
    }

    // Orientation fixed by the curvature sign K = +kappa: the first point is a
    // left end (region to its right) iff psi' < 0 there.
    auto region_mass_at = [&](const std::array<double, 6>& pts, unsigned mask, bool flip) {
      std::vector<double> chosen;
      int first_sign = 0;
      for (int i = 0; i < 6; ++i)
        if (mask & (1u << i)) {
          if (first_sign == 0) first_sign = sign[i];
          chosen.push_back(pts[i]);
        }
      const bool left_unbounded = (first_sign > 0) != flip;
      std::sort(chosen.begin(), chosen.end());
      double m = 0.0;
      for (const auto& iv : region_from_points(chosen, left_unbounded)) m += d.interval_mass(iv);
      return std::pair{m, left_unbounded};
    };

    const int n = opt.seeds;
    std::vector<std::array<double, 6>> level(n);
    std::vector<std::array<double, 6>> level_cdf(n);
    std::vector<double> seed(n);
    for (int i = 0; i < n; ++i) {
      seed[i] = c * static_cast<double>(i) / static_cast<double>(n - 1);
      level[i] = points_at(seed[i]);
      for (int k = 0; k < 6; ++k) level_cdf[i][k] = d.cdf(level[i][k]);
    }

    // Scan-only mass from cached CDF values at the level points; it only has to
    // locate sign changes. Roots and candidates use the accurate path.
    auto scan_mass = [&](int i, unsigned mask, bool flip) {
      int first_sign = 0;
      for (int k = 0; k < 6 && first_sign == 0; ++k)
        if (mask & (1u << k)) first_sign = sign[k];
      bool inside = (first_sign > 0) != flip;
      double m = 0.0, start = 0.0;
      for (int k = 0; k < 6; ++k) {
        if (!(mask & (1u << k))) continue;
        if (inside) m += level_cdf[i][k] - start;
        else start = level_cdf[i][k];
        inside = !inside;
      }
      if (inside) m += 1.0 - start;
      return m;
    };

    for (unsigned mask : masks) {
      for (bool flip : {false, true}) {
        std::vector<double> resid(n);
        for (int i = 0; i < n; ++i) resid[i] = scan_mass(i, mask, flip) - target;
        for (int i = 0; i + 1 < n; ++i) {
          double s_root;
          if (resid[i] == 0.0) s_root = seed[i];
          else if (std::signbit(resid[i]) != std::signbit(resid[i + 1]) && resid[i + 1] != 0.0)
            s_root = find_root([&](double s) { return region_mass_at(points_at(s), mask, flip).first - target; },
                               seed[i], seed[i + 1], 0.0);
          else continue;
          const auto pts = points_at(s_root);
          const bool left_unbounded = region_mass_at(pts, mask, flip).second;
          std::vector<double> chosen;
          for (int k = 0; k < 6; ++k)
            if (mask & (1u << k)) chosen.push_back(pts[k]);
          Candidate cand;
          if (detail::make_candidate(d, std::move(chosen), left_unbounded, target, c, opt, cand))
            detail::insert_unique(out, std::move(cand), opt.dedupe_tol);
        }
        if (resid[n - 1] == 0.0) {
          const auto& pts = level[n - 1];
          const bool left_unbounded = region_mass_at(pts, mask, flip).second;
          std::vector<double> chosen;
          for (int k = 0; k < 6; ++k)
            if (mask & (1u << k)) chosen.push_back(pts[k]);
          Candidate cand;
          if (detail::make_candidate(d, std::move(chosen), left_unbounded, target, c, opt, cand))
            detail::insert_unique(out, std::move(cand), opt.dedupe_tol);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), detail::candidate_less);
  return out;
}

}  // namespace dgiso

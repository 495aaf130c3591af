#pragma once

// Brute-force minimiser over k-point boundaries on a uniform grid. k - 1 points
// sit on grid nodes and the rightmost point is solved continuously so that the
// enclosed mass is exactly A. Used as an independent cross-check of ray
// optimality.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgiso/density.hpp"
#include "dgiso/line.hpp"
#include "dgiso/report.hpp"
#include "dgiso/roots.hpp"

namespace dgiso {

struct OracleConfig {
  double domain_halfwidth = 0.0;  ///< 0 selects 1 + 8a
  int grid_points = 4001;
  int max_boundary_points = 4;
  int min_boundary_points = 1;
  double mass_tolerance = 5e-4;
  /// Band pruning: every boundary point's |psi'| lies within `band` of the others.
  double band = 0.2;
  /// Disables band and perimeter-bound pruning. Only allowed for N <= 401.
  bool exhaustive = false;
  bool band_pruning = true;
  bool bound_pruning = true;
  /// Restricts every boundary point to the open interval (lo, hi).
  std::optional<Interval> point_window;

  [[nodiscard]] double halfwidth(const DoubleGaussian& d) const {
    return domain_halfwidth > 0.0 ? domain_halfwidth : 1.0 + 8.0 * d.stddev();
  }
};

inline void validate(const OracleConfig& cfg) {
  if (cfg.grid_points < 3 || cfg.grid_points % 2 == 0)
    throw std::invalid_argument("oracle: grid_points must be odd and >= 3");
  if (cfg.max_boundary_points < 1 || cfg.max_boundary_points > 6)
    throw std::invalid_argument("oracle: max_boundary_points must lie in [1, 6]");
  if (cfg.min_boundary_points < 1 || cfg.min_boundary_points > cfg.max_boundary_points)
    throw std::invalid_argument("oracle: min_boundary_points must lie in [1, max_boundary_points]");
  if (cfg.exhaustive && cfg.grid_points > 401)
    throw std::invalid_argument("oracle: exhaustive mode requires grid_points <= 401");
  if (!(cfg.mass_tolerance > 0.0)) throw std::invalid_argument("oracle: mass_tolerance must be positive");
  if (!(cfg.band > 0.0)) throw std::invalid_argument("oracle: band must be positive");
  if (cfg.domain_halfwidth < 0.0 || !std::isfinite(cfg.domain_halfwidth))
    throw std::invalid_argument("oracle: domain_halfwidth must be positive");
}

struct OracleResult {
  BoundaryConfiguration best;
  std::uint64_t evaluated = 0;  ///< configurations whose last point was solved
  std::uint64_t pruned = 0;     ///< subtrees or closures cut by the perimeter bound
};

namespace detail {

/// Total order used to pick the winner: perimeter rounded to 1e-12, then
/// fewer points, then right-unbounded first, then lexicographic points.
struct OracleKey {
  long long perimeter = 0;
  int k = 0;
  bool left_unbounded = false;
  std::vector<double> points;

  friend bool operator<(const OracleKey& l, const OracleKey& r) {
    if (l.perimeter != r.perimeter) return l.perimeter < r.perimeter;
    if (l.k != r.k) return l.k < r.k;
    if (l.left_unbounded != r.left_unbounded) return !l.left_unbounded;
    return l.points < r.points;
  }
};

class OracleSearch {
 public:
  OracleSearch(const DoubleGaussian& d, double A, const OracleConfig& cfg)
      : d_(d), A_(A), cfg_(cfg), band_on_(cfg.band_pruning && !cfg.exhaustive),
        bound_on_(cfg.bound_pruning && !cfg.exhaustive) {
    const int n = cfg.grid_points;
    const double L = cfg.halfwidth(d);
    x_.resize(n);
    f_.resize(n);
    F_.resize(n);
    slope_.resize(n);
    for (int j = 0; j < n; ++j) {
      x_[j] = L * static_cast<double>(2 * j - (n - 1)) / static_cast<double>(n - 1);
      f_[j] = d.density(x_[j]);
      F_[j] = d.cdf(x_[j]);
      slope_[j] = std::abs(d.psi_prime(x_[j]));
    }
    for (int j = 0; j < n; ++j) {
      if (cfg.point_window && !(x_[j] > cfg.point_window->lo && x_[j] < cfg.point_window->hi)) continue;
      allowed_.push_back(j);
    }
    by_slope_ = allowed_;
    std::sort(by_slope_.begin(), by_slope_.end(), [&](int l, int r) {
      return slope_[l] != slope_[r] ? slope_[l] < slope_[r] : l < r;
    });
    sorted_slope_.reserve(by_slope_.size());
    for (int j : by_slope_) sorted_slope_.push_back(slope_[j]);
    far_ = 40.0 * d.stddev();
    const double a2 = d.variance();
    slope_slack_ = (2.0 * L / static_cast<double>(n - 1)) * std::max(1.0 / a2, (1.0 - a2) / (a2 * a2)) * 1.01;
  }

  OracleResult run() {
    for (bool left : {false, true}) {
      left_ = left;
      chosen_.clear();
      descend(-1, 0.0, 0.0, 0.0, left, inf, -inf);
    }
    if (!have_best_) throw std::runtime_error("oracle: no feasible configuration");
    OracleResult out;
    out.best = make_configuration(d_, best_key_.points, best_key_.left_unbounded);
    out.evaluated = evaluated_;
    out.pruned = pruned_;
    return out;
  }

 private:
  // `prev` is the last fixed grid index (-1 if none); `mass` the region mass
  // left of it; `inside` whether the region continues right of it.
  void descend(int prev, double perim, double mass, double F_last, bool inside, double lo_s, double hi_s) {
    const int fixed = static_cast<int>(chosen_.size());
    if (fixed + 1 >= cfg_.min_boundary_points) close(perim, mass, F_last, inside, lo_s, hi_s);
    if (fixed + 1 >= cfg_.max_boundary_points) return;

    auto visit = [&](int j) {
      if (j <= prev) return;
      const double p = perim + f_[j];
      if (bound_on_ && have_best_ && p > best_perimeter_ + 1e-15) {
        ++pruned_;
        return;
      }
      const double lo = std::min(lo_s, slope_[j]);
      const double hi = std::max(hi_s, slope_[j]);
      if (band_on_ && hi - lo > cfg_.band) return;
      const double m = inside ? mass + (F_[j] - F_last) : mass;
      chosen_.push_back(j);
      descend(j, p, m, F_[j], !inside, lo, hi);
      chosen_.pop_back();
    };

    if (band_on_ && fixed > 0) {
      const auto first = std::lower_bound(sorted_slope_.begin(), sorted_slope_.end(), hi_s - cfg_.band);
      const auto last = std::upper_bound(sorted_slope_.begin(), sorted_slope_.end(), lo_s + cfg_.band);
      for (auto it = first; it != last; ++it) visit(by_slope_[static_cast<std::size_t>(it - sorted_slope_.begin())]);
    } else {
      for (auto it = std::upper_bound(allowed_.begin(), allowed_.end(), prev); it != allowed_.end(); ++it) visit(*it);
    }
  }

  // Solves the rightmost point so that the total mass is A.
  void close(double perim, double mass, double F_last, bool inside, double lo_s, double hi_s) {
    // inside: mass + F(p) - F_last = A; outside: mass + 1 - F(p) = A.
    const double target = inside ? A_ - mass + F_last : 1.0 - A_ + mass;
    if (inside ? !(A_ > mass) : !(A_ < 1.0 + mass)) return;
    if (!(target > F_last && target < 1.0)) return;

    const auto upper = std::lower_bound(F_.begin(), F_.end(), target);
    const auto j = static_cast<std::size_t>(upper - F_.begin());
    double lo = 0.0, hi = 0.0, f_floor = 0.0;
    if (j == 0) {
      lo = x_.front() - far_;
      hi = x_.front();
    } else if (j == F_.size()) {
      lo = x_.back();
      hi = x_.back() + far_;
    } else {
      lo = x_[j - 1];
      hi = x_[j];
      f_floor = std::min(f_[j - 1], f_[j]);
    }
    if (!chosen_.empty()) lo = std::max(lo, x_[static_cast<std::size_t>(chosen_.back())]);
    if (bound_on_ && have_best_ && perim + f_floor > best_perimeter_ + 1e-15) {
      ++pruned_;
      return;
    }
    // |psi'| moves by at most h * max|psi''| across a cell.
    if (band_on_ && !chosen_.empty() && j > 0 && j < F_.size()) {
      const double lo_cell = std::min(slope_[j - 1], slope_[j]) - slope_slack_;
      const double hi_cell = std::max(slope_[j - 1], slope_[j]) + slope_slack_;
      if (lo_cell > lo_s + cfg_.band || hi_cell < hi_s - cfg_.band) return;
    }

    double p = 0.0;
    if (j < F_.size() && F_[j] == target) {
      p = x_[j];
    } else if (!solve_in_cell(j, target, lo, hi, p)) {
      try {
        p = find_root([&](double x) { return d_.cdf(x) - target; }, lo, hi, 0.0);
      } catch (const std::domain_error&) {
        return;
      }
    }
    ++evaluated_;
    if (!chosen_.empty() && !(p > x_[static_cast<std::size_t>(chosen_.back())])) return;
    if (cfg_.point_window && !(p > cfg_.point_window->lo && p < cfg_.point_window->hi)) return;
    if (band_on_ && !chosen_.empty()) {
      const double s = std::abs(d_.psi_prime(p));
      if (std::max(hi_s, s) - std::min(lo_s, s) > cfg_.band) return;
    }
    const double total = perim + d_.density(p);
    if (have_best_ && total > best_perimeter_ + 1e-9) return;

    OracleKey key;
    key.perimeter = std::llround(total * 1e12);
    key.k = static_cast<int>(chosen_.size()) + 1;
    key.left_unbounded = left_;
    key.points.reserve(chosen_.size() + 1);
    for (int i : chosen_) key.points.push_back(x_[static_cast<std::size_t>(i)]);
    key.points.push_back(p);
    if (!have_best_ || key < best_key_) {
      best_key_ = std::move(key);
      best_perimeter_ = total;
      have_best_ = true;
    }
  }

  // Newton from the linear interpolant of the grid CDF. Returns false when the
  // iterate leaves the cell or stalls, in which case the caller falls back to
  // the bracketed solver.
  bool solve_in_cell(std::size_t j, double target, double lo, double hi, double& p) const {
    if (j == 0 || j == F_.size()) return false;
    const double span = F_[j] - F_[j - 1];
    if (!(span > 0.0)) return false;
    double x = x_[j - 1] + (target - F_[j - 1]) / span * (x_[j] - x_[j - 1]);
    for (int it = 0; it < 4; ++it) {
      const double fx = d_.density(x);
      if (!(fx > 0.0)) return false;
      const double step = (d_.cdf(x) - target) / fx;
      x -= step;
      if (!(x >= lo && x <= hi)) return false;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        p = x;
        return true;
      }
    }
    return false;
  }

  const DoubleGaussian& d_;
  double A_;
  const OracleConfig& cfg_;
  bool band_on_;
  bool bound_on_;
  double far_ = 0.0;
  double slope_slack_ = 0.0;
  std::vector<double> x_, f_, F_, slope_;
  std::vector<int> allowed_, by_slope_;
  std::vector<double> sorted_slope_;
  std::vector<int> chosen_;
  bool left_ = false;
  bool have_best_ = false;
  double best_perimeter_ = inf;
  OracleKey best_key_;
  std::uint64_t evaluated_ = 0;
  std::uint64_t pruned_ = 0;
};

}  // namespace detail

inline OracleResult brute_force_search(const DoubleGaussian& d, double A, const OracleConfig& cfg = {}) {
  if (!(A > 0.0 && A < 0.5)) throw std::invalid_argument("brute_force_minimum: mass must lie in (0, 1/2)");
  validate(cfg);
  detail::OracleSearch search(d, A, cfg);
  return search.run();
}

inline BoundaryConfiguration brute_force_minimum(const DoubleGaussian& d, double A, const OracleConfig& cfg = {}) {
  return brute_force_search(d, A, cfg).best;
}

struct ProfileRow {
  double a2 = 0.0;
  double A = 0.0;
  double ray_point = 0.0;
  double ray_perimeter = 0.0;
  BoundaryConfiguration best;
  double gap = 0.0;  ///< oracle best perimeter minus ray perimeter
};

inline ProfileRow profile_row(const DoubleGaussian& d, double A, const OracleConfig& cfg = {}) {
  const BoundaryConfiguration ray = ray_for_mass(d, A);
  ProfileRow row;
  row.a2 = d.variance();
  row.A = A;
  row.ray_point = ray.points.front();
  row.ray_perimeter = ray.perimeter;
  row.best = brute_force_minimum(d, A, cfg);
  row.gap = row.best.perimeter - ray.perimeter;
  return row;
}

inline std::vector<ProfileRow> profile_table(const DoubleGaussian& d, const std::vector<double>& masses,
                                             const OracleConfig& cfg = {}) {
  std::vector<ProfileRow> rows;
  rows.reserve(masses.size());
  for (double A : masses) rows.push_back(profile_row(d, A, cfg));
  return rows;
}

/// Shortest decimal form that round-trips, at most 17 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Writes rows as CSV with columns a2, A, k, p1..p<kmax>, mass, perimeter,
/// ray_perimeter, gap. Unused point columns stay empty.
inline void write_oracle_csv(std::ostream& os, const std::vector<ProfileRow>& rows, int kmax) {
  os << "a2,A,k";
  for (int i = 1; i <= kmax; ++i) os << ",p" << i;
  os << ",mass,perimeter,ray_perimeter,gap\n";
  for (const auto& r : rows) {
    os << format_number(r.a2) << ',' << format_number(r.A) << ',' << r.best.points.size();
    for (int i = 0; i < kmax; ++i) {
      os << ',';
      if (static_cast<std::size_t>(i) < r.best.points.size()) os << format_number(r.best.points[static_cast<std::size_t>(i)]);
    }
    os << ',' << format_number(r.best.mass) << ',' << format_number(r.best.perimeter) << ','
       << format_number(r.ray_perimeter) << ',' << format_number(r.gap) << '\n';
  }
}

/// The oracle never finds anything cheaper than the ray by more than `slack`,
/// and its winner meets the mass constraint to the oracle's tolerance.
inline VerificationReport oracle_cross_check(const DoubleGaussian& d, double A, const OracleConfig& cfg = {},
                                             double slack = 1e-6) {
  VerificationReport r;
  ReportTimer timer(r);
  r.id = "oracle_cross_check";
  r.parameters["a2"] = d.variance();
  r.parameters["A"] = A;
  r.parameters["grid_points"] = cfg.grid_points;
  r.parameters["kmax"] = cfg.max_boundary_points;
  r.tolerances["slack"] = slack;
  r.tolerances["mass"] = cfg.mass_tolerance;

  const BoundaryConfiguration ray = ray_for_mass(d, A);
  const OracleResult res = brute_force_search(d, A, cfg);
  const double gap = res.best.perimeter - ray.perimeter;
  r.witnesses["ray_point"] = ray.points.front();
  r.witnesses["ray_perimeter"] = ray.perimeter;
  r.witnesses["best_points"] = res.best.points;
  r.witnesses["best_left_unbounded"] = res.best.left_unbounded();
  r.witnesses["best_perimeter"] = res.best.perimeter;
  r.witnesses["best_mass"] = res.best.mass;
  r.witnesses["gap"] = gap;
  r.witnesses["evaluated"] = res.evaluated;
  r.witnesses["pruned"] = res.pruned;
  r.require(gap >= -slack, "oracle found a configuration cheaper than the ray");
  r.require(std::abs(res.best.mass - A) <= cfg.mass_tolerance, "oracle winner misses the target mass");
  return r;
}

}  // namespace dgiso

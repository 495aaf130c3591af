#pragma once

// Command implementations behind the dgiso tool: grid sweeps over (a^2, A),
// report aggregation and CSV / JSON output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dgiso/line.hpp"
#include "dgiso/oracle.hpp"
#include "dgiso/plane.hpp"
#include "dgiso/report.hpp"

namespace dgiso {

enum ExitCode : int { exit_ok = 0, exit_verification_failed = 1, exit_invalid_config = 2, exit_io_failure = 3 };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

inline std::vector<double> default_variances() {
  return {0.05, 0.1, 0.16, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0, 1.25, 1.5};
}

/// 0.02, 0.04, ..., 0.48, each formed as i / 50 so the values are exact decimals.
inline std::vector<double> default_masses() {
  std::vector<double> m;
  for (int i = 1; i <= 24; ++i) m.push_back(static_cast<double>(i) / 50.0);
  return m;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct RunConfig {
  std::vector<double> variances = default_variances();
  std::vector<double> masses = default_masses();
  OracleConfig oracle;
  Format format = Format::csv;
  std::string output_path;  ///< empty writes to standard output
  unsigned workers = default_workers();
  Tolerances tol;
  bool timing = false;      ///< embed wall times in JSON reports
  std::uint64_t seed = 0;   ///< reserved; every algorithm is deterministic
};

inline void validate_variance(double a2) {
  if (!(a2 > 0.0 && a2 <= 2.25)) throw ConfigError("variance must lie in (0, 2.25]");
}

inline void validate_mass(double A) {
  if (!(A > 0.0 && A < 0.5)) throw ConfigError("mass must lie strictly inside (0, 1/2)");
}

inline void validate(const RunConfig& cfg) {
  if (cfg.variances.empty()) throw ConfigError("variance grid is empty");
  if (cfg.masses.empty()) throw ConfigError("mass grid is empty");
  for (double a2 : cfg.variances) validate_variance(a2);
  for (double A : cfg.masses) validate_mass(A);
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
  for (double t : {cfg.tol.mass, cfg.tol.root, cfg.tol.margin})
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tolerances must be positive and finite");
  try {
    validate(cfg.oracle);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Runs fn(0..n-1) on up to `workers` threads; results come back in index
/// order. The first exception by index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::size_t next = 0;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= n) return;
        i = next++;
      }
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream os(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open output file " + cfg.output_path);
  os << text;
  os.close();
  if (!os) throw IoError("failed writing output file " + cfg.output_path);
}

struct Cell {
  double a2 = 0.0;
  double A = 0.0;
};

inline std::vector<Cell> cells(const RunConfig& cfg) {
  std::vector<Cell> out;
  for (double a2 : cfg.variances)
    for (double A : cfg.masses) out.push_back({a2, A});
  return out;
}

inline std::string csv_join(const std::vector<double>& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

/// (a^2, A, ray point, ray perimeter) for every grid cell.
inline int cmd_profile(const RunConfig& cfg) {
  validate(cfg);
  const auto grid = cells(cfg);
  const auto rays = parallel_map<BoundaryConfiguration>(grid.size(), cfg.workers, [&](std::size_t i) {
    return ray_for_mass(DoubleGaussian(grid[i].a2), grid[i].A);
  });
  std::ostringstream os;
  if (cfg.format == Format::csv) {
    os << "a2,A,ray_point,ray_perimeter\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      os << format_number(grid[i].a2) << ',' << format_number(grid[i].A) << ','
         << format_number(rays[i].points.front()) << ',' << format_number(rays[i].perimeter) << '\n';
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
      rows.push_back({{"a2", grid[i].a2}, {"A", grid[i].A}, {"ray_point", rays[i].points.front()},
                      {"ray_perimeter", rays[i].perimeter}});
    os << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return exit_ok;
}

/// Oracle minimum against the ray for every grid cell. Exits 1 if the oracle
/// beats the ray anywhere by more than 1e-6.
inline int cmd_oracle(const RunConfig& cfg) {
  validate(cfg);
  const auto grid = cells(cfg);
  const auto rows = parallel_map<ProfileRow>(grid.size(), cfg.workers, [&](std::size_t i) {
    return profile_row(DoubleGaussian(grid[i].a2), grid[i].A, cfg.oracle);
  });
  bool ok = true;
  for (const auto& r : rows)
    if (r.gap < -1e-6) ok = false;
  std::ostringstream os;
  if (cfg.format == Format::csv) {
    write_oracle_csv(os, rows, cfg.oracle.max_boundary_points);
  } else {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
      out.push_back({{"a2", r.a2},
                     {"A", r.A},
                     {"k", r.best.points.size()},
                     {"points", r.best.points},
                     {"left_unbounded", r.best.left_unbounded()},
                     {"mass", r.best.mass},
                     {"perimeter", r.best.perimeter},
                     {"ray_perimeter", r.ray_perimeter},
                     {"gap", r.gap}});
    os << nlohmann::json{{"rows", out}}.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return ok ? exit_ok : exit_verification_failed;
}

/// Vertical against horizontal half-planes of equal mass.
inline int cmd_lines(const RunConfig& cfg) {
  validate(cfg);
  const auto grid = cells(cfg);
  const auto rows = parallel_map<LineComparison>(grid.size(), cfg.workers, [&](std::size_t i) {
    return line_comparison(PlaneDensity(grid[i].a2), grid[i].A);
  });
  bool ok = true;
  std::ostringstream os;
  if (cfg.format == Format::csv) os << "a2,A,b_vertical,c_horizontal,perim_vertical,perim_horizontal,margin\n";
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.margin() > cfg.tol.margin)) ok = false;
    if (cfg.format == Format::csv) {
      os << format_number(grid[i].a2) << ',' << format_number(r.A) << ',' << format_number(r.b_vertical) << ','
         << format_number(r.c_horizontal) << ',' << format_number(r.perim_vertical) << ','
         << format_number(r.perim_horizontal) << ',' << format_number(r.margin()) << '\n';
    } else {
      out.push_back({{"a2", grid[i].a2},
                     {"A", r.A},
                     {"b_vertical", r.b_vertical},
                     {"c_horizontal", r.c_horizontal},
                     {"perim_vertical", r.perim_vertical},
                     {"perim_horizontal", r.perim_horizontal},
                     {"margin", r.margin()}});
    }
  }
  if (cfg.format == Format::json) os << nlohmann::json{{"rows", out}}.dump(2) << '\n';
  emit(cfg, os.str());
  return ok ? exit_ok : exit_verification_failed;
}

/// Scored stationary candidates at one (a^2, A).
inline int cmd_candidates(const RunConfig& cfg, double a2, double A) {
  validate_variance(a2);
  validate_mass(A);
  validate(cfg);
  const DoubleGaussian d(a2);
  const auto scored = score_candidates(d, A);
  std::ostringstream os;
  if (cfg.format == Format::csv) {
    os << "tag,points,left_unbounded,mass,perimeter,curvature,second_variation,gap,verdict\n";
    for (const auto& sc : scored)
      os << to_string(sc.candidate.tag) << ',' << csv_join(sc.config.points) << ','
         << (sc.config.left_unbounded() ? "true" : "false") << ',' << format_number(sc.config.mass) << ','
         << format_number(sc.config.perimeter) << ',' << format_number(sc.candidate.curvature) << ','
         << (sc.has_stability ? to_string(sc.stability.second_variation_sign) : "n/a") << ','
         << format_number(sc.gap) << ',' << verdict(sc, cfg.tol.margin) << '\n';
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& sc : scored)
      rows.push_back({{"tag", std::string(to_string(sc.candidate.tag))},
                      {"points", sc.config.points},
                      {"left_unbounded", sc.config.left_unbounded()},
                      {"mass", sc.config.mass},
                      {"perimeter", sc.config.perimeter},
                      {"curvature", sc.candidate.curvature},
                      {"second_variation",
                       sc.has_stability ? std::string(to_string(sc.stability.second_variation_sign)) : "n/a"},
                      {"gap", sc.gap},
                      {"verdict", verdict(sc, cfg.tol.margin)}});
    os << nlohmann::json{{"a2", a2}, {"A", A}, {"candidates", rows}}.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return exit_ok;
}

/// Interval endpoints (s, t) probed by the interval-versus-two-rays check.
inline std::vector<std::pair<double, double>> interval_samples() {
  return {{-0.3, 0.3}, {-0.1, 0.5}, {-0.5, 0.2}, {0.0, 0.6}, {-0.8, 0.4}};
}

/// Every check that applies to the configured grids, in a fixed order.
inline std::vector<std::function<VerificationReport()>> verification_tasks(const RunConfig& cfg) {
  std::vector<std::function<VerificationReport()>> tasks;
  const Tolerances tol = cfg.tol;
  const OracleConfig oracle = cfg.oracle;
  const std::vector<double> masses = cfg.masses;
  for (double a2 : cfg.variances) {
    const DoubleGaussian d(a2);
    const PlaneDensity p(a2);
    if (a2 <= 1.0) tasks.emplace_back([d, tol] { return inflection_check(d, tol); });
    if (a2 <= 0.5) {
      tasks.emplace_back([d] { return gamma_function_check(d); });
      tasks.emplace_back([d] { return sliding_interval_check(d); });
      tasks.emplace_back([d, masses] { return straddling_mass_bound(d, masses); });
      for (auto [s, t] : interval_samples()) {
        const double m = d.interval_mass(s, t);
        if (m > 0.0 && m < 0.5) tasks.emplace_back([d, s, t, tol] { return interval_vs_two_rays(d, s, t, tol); });
      }
    }
    if (a2 >= 0.5 && a2 < 1.0) tasks.emplace_back([d] { return moderate_variance_bounds(d); });
    tasks.emplace_back([p] { return stationary_lines_check(p); });
    for (double A : masses) {
      tasks.emplace_back([d, A, tol] { return verify_ray_optimality(d, A, tol); });
      tasks.emplace_back([d, A, oracle] { return oracle_cross_check(d, A, oracle); });
      if (a2 <= 0.5 && A <= 0.25) tasks.emplace_back([d, A, tol] { return single_vs_double_ray(d, A, tol); });
      tasks.emplace_back([p, A, tol] { return compare_lines(p, A, tol); });
      tasks.emplace_back([p, A] { return ray_split_check(p, A); });
    }
  }
  return tasks;
}

/// Runs every applicable check. The JSON output lists all reports plus the
/// failing ones; the CSV output has one line per report.
inline int cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  const auto tasks = verification_tasks(cfg);
  const auto reports =
      parallel_map<VerificationReport>(tasks.size(), cfg.workers, [&](std::size_t i) { return tasks[i](); });
  bool all = true;
  nlohmann::json failing = nlohmann::json::array();
  for (const auto& r : reports)
    if (!r.passed) {
      all = false;
      failing.push_back({{"id", r.id}, {"parameters", r.parameters}, {"failures", r.failures}});
    }
  std::ostringstream os;
  if (cfg.format == Format::json) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) list.push_back(to_json(r, cfg.timing));
    os << nlohmann::json{{"passed", all}, {"report_count", reports.size()}, {"failing", failing}, {"reports", list}}
              .dump(2)
       << '\n';
  } else {
    os << "id,a2,A,passed,failures\n";
    for (const auto& r : reports) {
      auto param = [&](const char* k) {
        const auto it = r.parameters.find(k);
        return it == r.parameters.end() ? std::string() : format_number(it->second);
      };
      std::string why;
      for (const auto& f : r.failures) why += (why.empty() ? "" : "; ") + f;
      os << r.id << ',' << param("a2") << ',' << param("A") << ',' << (r.passed ? "true" : "false") << ",\"" << why
         << "\"\n";
    }
  }
  emit(cfg, os.str());
  if (!all) {
    std::cerr << failing.size() << " verification report(s) failed:\n";
    for (const auto& f : failing) std::cerr << "  " << f.dump() << '\n';
  }
  return all ? exit_ok : exit_verification_failed;
}

}  // namespace dgiso

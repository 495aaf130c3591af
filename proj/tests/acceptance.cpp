// Acceptance gate: one PASS/FAIL line per criterion with the measured value,
// the pinned tolerance and the wall time against its budget. Exits 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dgiso/dgiso.hpp"
#include "oracles.hpp"

namespace {

using namespace dgiso;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %2d %-28s %s | time %.4gs (budget %.4gs%s)\n", pass ? "PASS" : "FAIL", id, name,
              out.detail.c_str(), dt, budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<double> variances_up_to(double top) {
  std::vector<double> out;
  for (double a2 : default_variances())
    if (a2 <= top) out.push_back(a2);
  return out;
}

}  // namespace

int main() {
  const auto variances = default_variances();
  const auto masses = default_masses();

  criterion(1, "twice_center_density", 1e-3, [] {
    const double v = 2.0 * DoubleGaussian(0.5).density(0.0);
    const double err = std::abs(v - 0.415107);
    return Outcome{err <= 1e-5, fmt2("2f(0)=%.9f |err|=%.2e (tol 1e-5)", v, err)};
  });

  criterion(2, "moderate_variance_bounds", 1.0, [] {
    bool ok = true;
    double worst_ratio = 0.0, worst_max = 0.0;
    // a in {1/sqrt 2, 0.8, 0.9, 0.99}, given as exact variances; squaring
    // 1/sqrt 2 in floating point lands one ulp below 1/2.
    for (double a2 : {0.5, 0.64, 0.81, 0.9801}) {
      const auto r = moderate_variance_bounds(DoubleGaussian(a2), 10000);
      const double m = r.witnesses["max_density"].get<double>();
      const double b = r.witnesses["bound_1_22"].get<double>();
      ok = ok && m <= b && m <= 0.345;
      worst_ratio = std::max(worst_ratio, m / b);
      worst_max = std::max(worst_max, m);
    }
    return Outcome{ok, fmt2("max f=%.6f (<= 0.345), max f/bound=%.6f (<= 1)", worst_max, worst_ratio)};
  });

  criterion(3, "inflection_point", 1.0, [] {
    double worst = 0.0;
    for (double a2 : variances_up_to(1.0)) {
      const DoubleGaussian d(a2);
      worst = std::max(worst, std::abs(d.psi_second(inflection_point(d))));
    }
    return Outcome{worst <= 1e-10, fmt("max |psi''(c)|=%.3e (tol 1e-10)", worst)};
  });

  criterion(4, "oracle_vs_ray_full_grid", 600.0, [&] {
    OracleConfig cfg;
    cfg.grid_points = 4001;
    cfg.max_boundary_points = 4;
    std::vector<Cell> grid;
    for (double a2 : variances)
      for (double A : masses) grid.push_back({a2, A});
    const auto gaps = parallel_map<double>(grid.size(), default_workers(), [&](std::size_t i) {
      return profile_row(DoubleGaussian(grid[i].a2), grid[i].A, cfg).gap;
    });
    double worst = inf;
    for (double g : gaps) worst = std::min(worst, g);
    return Outcome{worst >= -1e-6,
                   fmt2("%g cells, min(oracle - ray)=%.3e (>= -1e-6), N=4001 kmax=4", static_cast<double>(grid.size()),
                        worst)};
  });

  criterion(5, "stationary_elimination", 120.0, [&] {
    int multi = 0, survivors = 0, unstable = 0;
    for (double a2 : variances_up_to(1.0)) {
      const DoubleGaussian d(a2);
      for (double A : masses)
        for (const auto& sc : score_candidates(d, A)) {
          if (sc.config.points.size() < 2) continue;
          ++multi;
          if (sc.unstable()) ++unstable;
          else if (!(sc.gap > 1e-9)) ++survivors;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d multi-point candidates, %d unstable, %d surviving (must be 0)", multi, unstable,
                  survivors);
    return Outcome{survivors == 0, buf};
  });

  criterion(6, "gamma_function", 1.0, [] {
    bool ok = true;
    double min_gamma = inf;
    for (double a2 : {0.1, 0.25, 0.4, 0.5}) {
      const auto r = gamma_function_check(DoubleGaussian(a2), 2048, 1e-12);
      ok = ok && r.passed;
      min_gamma = std::min(min_gamma, r.witnesses["min_gamma_on_0_c"].get<double>());
    }
    return Outcome{ok, fmt("min gamma on [0,c]=%.3e (>= -1e-12), gamma(1/2)=0, gamma'(1/2)<0, one zero of gamma'",
                           min_gamma)};
  });

  criterion(7, "straddling_mass_and_window", 1.0, [&] {
    bool ok = true;
    double worst = 0.0, worst_deficit = inf;
    for (double a2 : variances_up_to(0.5)) {
      const DoubleGaussian d(a2);
      const auto r = straddling_mass_bound(d, masses, 2048, 1e-9);
      const auto s = sliding_interval_check(d);
      ok = ok && r.passed && s.passed;
      worst = std::max({worst, r.witnesses["family_max_mass"].get<double>(),
                        r.witnesses["candidate_max_mass"].get<double>()});
      worst_deficit = std::min(worst_deficit, s.witnesses["quarter_minus_I_0"].get<double>());
    }
    return Outcome{ok, fmt2("max straddling mass=%.12f (<= 0.25+1e-9), min 1/4-I(0)=%.3e (> 0), I decreasing", worst,
                            worst_deficit)};
  });

  criterion(8, "vertical_beats_horizontal", 30.0, [&] {
    bool ok = true;
    double min_margin = inf;
    for (double a2 : variances)
      for (double A : masses) {
        const auto r = compare_lines(PlaneDensity(a2), A);
        ok = ok && r.passed;
        min_margin = std::min(min_margin, r.witnesses["margin"].get<double>());
      }
    double worst_q = 0.0;
    const std::vector<std::pair<double, double>> spots{{0.05, 0.3}, {0.25, -0.4}, {0.5, 0.0}, {1.0, 1.2}, {1.5, 2.0}};
    for (auto [a2, b] : spots) {
      const PlaneDensity p(a2);
      worst_q = std::max(worst_q, std::abs(vertical_halfplane(p, b).mass - vertical_halfplane_quadrature(p, b)));
    }
    ok = ok && min_margin > 0.0 && worst_q <= 1e-8;
    return Outcome{ok, fmt2("min margin=%.4e (> 0), max |mass - 2D quadrature|=%.2e (tol 1e-8)", min_margin, worst_q)};
  });

  criterion(9, "stationary_lines", 1.0, [&] {
    // Compared against c (tanh(1/a^2) - 1) / (a^2 sqrt(1 + c^2)) as stated.
    // The curvature along y = c x + b is (c tanh(x/a^2) + b) / (a^2 sqrt(1 + c^2)),
    // so the true difference is c tanh(1/a^2) / (a^2 sqrt(1 + c^2)); an info
    // line reports the agreement with that expression.
    std::mt19937_64 rng(20150701);
    std::uniform_real_distribution<double> slope(0.1, 3.0), offset(-2.0, 2.0);
    double worst_stated = 0.0, worst_true = 0.0;
    for (double a2 : variances) {
      const PlaneDensity p(a2);
      for (int i = 0; i < 20; ++i) {
        const double c = (i % 2 ? -1.0 : 1.0) * slope(rng), b = offset(rng);
        const auto l = PlaneLine::sloped(c, b);
        const double diff = line_generalized_curvature(p, l, 1.0) - line_generalized_curvature(p, l, 0.0);
        const double stated = c * (std::tanh(1.0 / a2) - 1.0) / (a2 * std::sqrt(1.0 + c * c));
        worst_stated = std::max(worst_stated, std::abs(diff - stated));
        worst_true = std::max(worst_true, std::abs(diff - sloped_curvature_difference(a2, c)));
      }
    }
    double worst_const = 0.0;
    for (double a2 : variances) {
      const auto r = stationary_lines_check(PlaneDensity(a2), 20, 100, 1e-12);
      worst_const = std::max({worst_const, r.witnesses["worst_horizontal_deviation"].get<double>(),
                              r.witnesses["worst_vertical_deviation"].get<double>()});
    }
    std::printf("     info: sloped difference vs c tanh(1/a^2)/(a^2 sqrt(1+c^2)): max |err|=%.3e (tol 1e-12)\n",
                worst_true);
    return Outcome{worst_stated <= 1e-12 && worst_const <= 1e-12,
                   fmt2("sloped vs c(tanh(1/a^2)-1)/(a^2 sqrt(1+c^2)): max |err|=%.3e (tol 1e-12); "
                        "horizontal/vertical max deviation=%.3e (tol 1e-12)",
                        worst_stated, worst_const)};
  });

  criterion(10, "derivatives_and_normalisation", 1.0, [&] {
    std::mt19937_64 rng(2015);
    double worst = 0.0, worst_norm = 0.0;
    for (double a2 : variances) {
      const DoubleGaussian d(a2);
      const double reach = 1.0 + 4.0 * std::sqrt(a2);
      std::uniform_real_distribution<double> x(-reach, reach);
      for (int i = 0; i < 100; ++i) {
        const double v = x(rng);
        const auto p = d.log_density_derivatives(v);
        const auto fd = oracle::log_density_differences(a2, v, 1e-8);
        worst = std::max({worst, std::abs(p.first - fd.first), std::abs(p.second - fd.second),
                          std::abs(p.third - fd.third)});
      }
      worst_norm = std::max(worst_norm, std::abs(d.interval_mass(-inf, inf) - 1.0));
    }
    return Outcome{worst <= 1e-6 && worst_norm <= 1e-12,
                   fmt2("max |psi^(k) - FD|=%.3e (tol 1e-6), max |mass(R) - 1|=%.2e (tol 1e-12)", worst, worst_norm)};
  });

  std::printf("%d criterion/criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

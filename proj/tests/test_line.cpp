#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dgiso/line.hpp"
#include "oracles.hpp"

using dgiso::BoundaryConfiguration;
using dgiso::DoubleGaussian;
using dgiso::inf;
using dgiso::Sign;

namespace {

// Minimum of sum h_i v_i^2 / f_i over random unit vectors with eps . v = 0.
double sampled_form_minimum(const DoubleGaussian& d, const BoundaryConfiguration& cfg, int samples,
                            std::mt19937_64& rng) {
  const std::size_t k = cfg.points.size();
  std::normal_distribution<double> z;
  double best = inf;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> v(k);
    for (auto& x : v) x = z(rng);
    double dot = 0.0;
    for (std::size_t i = 0; i < k; ++i) dot += v[i] * cfg.inward_sign(i);
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      v[i] -= dot * cfg.inward_sign(i) / static_cast<double>(k);
      norm += v[i] * v[i];
    }
    double form = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      form += d.psi_second(cfg.points[i]) * v[i] * v[i] / (d.density(cfg.points[i]) * norm);
    best = std::min(best, form);
  }
  return best;
}

}  // namespace

TEST(Ray, MassAndPointAgainstQuadrature) {
  for (double a2 : {0.16, 0.5, 1.0, 1.5}) {
    const DoubleGaussian d(a2);
    for (double A : {0.02, 0.1, 0.3, 0.45}) {
      const auto ray = dgiso::ray_for_mass(d, A);
      ASSERT_EQ(ray.points.size(), 1u);
      EXPECT_NEAR(ray.mass, A, 1e-12);
      const double b = oracle::bisect([&](double x) { return oracle::mass(a2, x, 1.0 + 40.0 * std::sqrt(a2)) - A; },
                                      -10.0, 10.0, 60);
      EXPECT_NEAR(ray.points.front(), b, 1e-8) << a2 << ' ' << A;
      EXPECT_NEAR(ray.perimeter, oracle::density(a2, b), 1e-8);
    }
  }
}

TEST(Ray, HalfMassSitsAtOrigin) {
  const auto ray = dgiso::ray_for_mass(DoubleGaussian(0.5), 0.5);
  EXPECT_EQ(ray.points.front(), 0.0);
  EXPECT_NEAR(ray.perimeter, 0.415107497420594703 / 2.0, 1e-15);
  EXPECT_THROW(dgiso::ray_for_mass(DoubleGaussian(0.5), 0.0), std::invalid_argument);
  EXPECT_THROW(dgiso::ray_for_mass(DoubleGaussian(0.5), 1.0), std::invalid_argument);
}

TEST(Ray, PerimeterIncreasesWithMassWhenUnimodal) {
  const DoubleGaussian d(1.0);
  double prev = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double P = dgiso::ray_for_mass(d, i / 100.0).perimeter;
    EXPECT_GT(P, prev);
    prev = P;
  }
}

TEST(Score, RecomputesFromPoints) {
  const DoubleGaussian d(0.25);
  const auto cfg = dgiso::make_configuration(d, {0.8, -0.3, 1.6}, false);
  EXPECT_EQ(cfg.points, (std::vector<double>{-0.3, 0.8, 1.6}));
  ASSERT_EQ(cfg.region.size(), 2u);
  EXPECT_EQ(cfg.region[1].hi, inf);
  EXPECT_NEAR(cfg.mass, oracle::mass(0.25, -0.3, 0.8) + oracle::mass(0.25, 1.6, 20.0), 1e-10);
  EXPECT_NEAR(cfg.perimeter, oracle::density(0.25, -0.3) + oracle::density(0.25, 0.8) + oracle::density(0.25, 1.6),
              1e-14);
  EXPECT_EQ(cfg.inward_sign(0), 1);
  EXPECT_EQ(cfg.inward_sign(1), -1);
  EXPECT_EQ(cfg.inward_sign(2), 1);
  const auto left = dgiso::make_configuration(d, {0.0}, true);
  EXPECT_TRUE(left.left_unbounded());
  EXPECT_EQ(left.inward_sign(0), -1);
}

TEST(Score, RejectsMalformedConfigurations) {
  const DoubleGaussian d(0.5);
  BoundaryConfiguration bad;
  EXPECT_THROW(dgiso::score(d, bad), std::invalid_argument);
  bad.points = {0.5, 0.5};
  bad.region = {{0.5, 0.5}};
  EXPECT_THROW(dgiso::score(d, bad), std::invalid_argument);
  bad.points = {0.0, 1.0};
  bad.region = {{0.0, 2.0}};
  EXPECT_THROW(dgiso::score(d, bad), std::invalid_argument);
  bad.points = {std::nan(""), 1.0};
  EXPECT_THROW(dgiso::score(d, bad), std::invalid_argument);
}

TEST(SecondVariation, TwoPointWitnessIsTheComponentVelocity) {
  const DoubleGaussian d(0.25);
  const auto cfg = dgiso::make_configuration(d, {-0.2, 0.2}, false);
  const auto st = dgiso::second_variation_test(d, cfg);
  // eps = (+1, -1): u = (1/f(p1), 1/f(p2)).
  EXPECT_NEAR(st.witness_velocity[0], 1.0 / d.density(-0.2), 1e-12);
  EXPECT_NEAR(st.witness_velocity[1], 1.0 / d.density(0.2), 1e-12);
  EXPECT_NEAR(st.volume_residual, 0.0, 1e-12);
  // Both points inside (-c, c) where psi'' > 0.
  EXPECT_EQ(st.second_variation_sign, Sign::positive);
  const auto far = dgiso::make_configuration(d, {0.8, 1.4}, false);
  EXPECT_EQ(dgiso::second_variation_test(d, far).second_variation_sign, Sign::negative);
  EXPECT_THROW(dgiso::second_variation_test(d, dgiso::ray_for_mass(d, 0.2)), std::invalid_argument);
}

TEST(SecondVariation, FlatPointPlusConcavePointIsNegative) {
  // psi''(0) = 0 at unit variance and psi'' < 0 away from it.
  const DoubleGaussian d(1.0);
  const auto st = dgiso::second_variation_test(d, dgiso::make_configuration(d, {0.0, 3.0}, false));
  EXPECT_EQ(st.second_variation_sign, Sign::negative);
}

TEST(SecondVariation, SignAgreesWithRandomAdmissibleDirections) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  int negatives = 0, positives = 0;
  for (double a2 : {0.16, 0.5, 0.9}) {
    const DoubleGaussian d(a2);
    for (int trial = 0; trial < 300; ++trial) {
      const int k = 2 + trial % 3;
      std::vector<double> pts(k);
      for (auto& p : pts) p = pos(rng);
      std::sort(pts.begin(), pts.end());
      bool separated = true;
      for (int i = 1; i < k; ++i) separated = separated && pts[i] - pts[i - 1] > 1e-3;
      if (!separated) continue;
      const auto cfg = dgiso::make_configuration(d, pts, coin(rng));
      const auto st = dgiso::second_variation_test(d, cfg);
      EXPECT_NEAR(st.volume_residual, 0.0, 1e-9);
      const double sampled = sampled_form_minimum(d, cfg, 4000, rng);
      if (st.second_variation_sign == Sign::negative) {
        ++negatives;
        EXPECT_LT(st.value, 0.0);
      } else {
        ++positives;
        // No admissible direction can do better than zero.
        EXPECT_GE(sampled, -1e-9) << "a2=" << a2 << " trial=" << trial;
      }
      if (sampled < -1e-6) EXPECT_EQ(st.second_variation_sign, Sign::negative) << "a2=" << a2 << " trial=" << trial;
    }
  }
  EXPECT_GT(negatives, 0);
  EXPECT_GT(positives, 0);
}

TEST(SecondVariation, NegativeWitnessIsAdmissible) {
  const DoubleGaussian d(0.16);
  const auto cfg = dgiso::make_configuration(d, {-0.1, 0.9, 1.5}, false);
  const auto st = dgiso::second_variation_test(d, cfg);
  ASSERT_EQ(st.second_variation_sign, Sign::negative);
  double residual = 0.0, form = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double f = d.density(cfg.points[i]), u = st.witness_velocity[i];
    residual += f * u * cfg.inward_sign(i);
    form += f * u * u * d.psi_second(cfg.points[i]);
  }
  EXPECT_NEAR(residual, 0.0, 1e-12);
  EXPECT_NEAR(form, st.value, 1e-9 * std::abs(form));
  EXPECT_LT(form, 0.0);
}

TEST(Gamma, NonnegativeBelowHalfVariance) {
  for (double a2 : {0.05, 0.1, 0.16, 0.25, 0.4, 0.5}) {
    const auto r = dgiso::gamma_function_check(DoubleGaussian(a2));
    EXPECT_TRUE(r.passed) << a2 << ' ' << r.failures.size();
    EXPECT_EQ(r.witnesses["gamma_prime_zero_count"], 1);
  }
  EXPECT_THROW(dgiso::gamma_function_check(DoubleGaussian(0.6)), std::domain_error);
}

TEST(Gamma, DerivativeMatchesDifferences) {
  const DoubleGaussian d(0.3);
  for (double s : {0.05, 0.2, 0.5, 0.7}) {
    const double h = 1e-6;
    const double fd = (dgiso::gamma_function(d, s + h) - dgiso::gamma_function(d, s - h)) / (2 * h);
    EXPECT_NEAR(dgiso::gamma_derivative(d, s), fd, 1e-6);
  }
  EXPECT_EQ(dgiso::gamma_function(d, 0.5), 0.0);
}

TEST(SlidingWindow, BelowQuarterAndDecreasing) {
  for (double a2 : {0.05, 0.1, 0.25, 0.5}) {
    const DoubleGaussian d(a2);
    const auto r = dgiso::sliding_interval_check(d);
    EXPECT_TRUE(r.passed) << a2;
    EXPECT_NEAR(dgiso::sliding_interval_mass(d, 0.0), oracle::mass(a2, -1.0, 0.0), 1e-10);
  }
}

TEST(IntervalVsRays, HoldsOnSamplePairs) {
  for (double a2 : {0.05, 0.16, 0.25, 0.5}) {
    const DoubleGaussian d(a2);
    for (auto [s, t] : std::vector<std::pair<double, double>>{{-0.3, 0.3}, {-0.1, 0.5}, {0.0, 0.6}}) {
      if (d.interval_mass(s, t) >= 0.5) continue;
      const auto r = dgiso::interval_vs_two_rays(d, s, t);
      EXPECT_TRUE(r.passed) << a2 << ' ' << s << ' ' << t;
      EXPECT_GT(r.witnesses["gap"].get<double>(), 0.0);
    }
  }
  EXPECT_THROW(dgiso::interval_vs_two_rays(DoubleGaussian(0.5), 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(dgiso::interval_vs_two_rays(DoubleGaussian(0.5), -1.5, 0.2), std::invalid_argument);
}

TEST(ComponentRay, DoubleRayStartsFurtherOut) {
  for (double a2 : {0.05, 0.1, 0.25, 0.5}) {
    const DoubleGaussian d(a2);
    for (double A : {0.01, 0.1, 0.2, 0.25}) {
      const auto r = dgiso::single_vs_double_ray(d, A);
      EXPECT_TRUE(r.passed) << a2 << ' ' << A;
      // Component ray by bisection on the component tail.
      const double s = oracle::bisect(
          [&](double x) { return 0.5 * (1.0 - oracle::normal_cdf((x - 1.0) / std::sqrt(a2))) - A; }, 0.0, 10.0);
      EXPECT_NEAR(r.witnesses["s"].get<double>(), s, 1e-10);
    }
  }
  EXPECT_THROW(dgiso::single_vs_double_ray(DoubleGaussian(0.5), 0.3), std::invalid_argument);
}

TEST(ModerateVariance, BoundsHold) {
  for (double a2 : {0.5, 0.6, 0.75, 0.9, 0.99}) {
    const auto r = dgiso::moderate_variance_bounds(DoubleGaussian(a2));
    EXPECT_TRUE(r.passed) << a2;
  }
  EXPECT_THROW(dgiso::moderate_variance_bounds(DoubleGaussian(0.4)), std::domain_error);
  EXPECT_THROW(dgiso::moderate_variance_bounds(DoubleGaussian(1.0)), std::domain_error);
}

TEST(InflectionReport, PassesOnGrid) {
  for (double a2 : {0.05, 0.25, 0.5, 0.9, 1.0}) EXPECT_TRUE(dgiso::inflection_check(DoubleGaussian(a2)).passed);
}

TEST(StraddlingIntervals, MassAtMostQuarter) {
  const std::vector<double> masses{0.1, 0.2, 0.24, 0.26, 0.3, 0.4, 0.48};
  for (double a2 : {0.05, 0.16, 0.25, 0.5}) {
    const auto r = dgiso::straddling_mass_bound(DoubleGaussian(a2), masses, 512);
    EXPECT_TRUE(r.passed) << a2 << ' ' << r.witnesses.dump();
  }
}

TEST(RayOptimality, PassesAcrossRegimes) {
  for (double a2 : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5}) {
    const DoubleGaussian d(a2);
    for (double A : {0.04, 0.2, 0.36, 0.48}) {
      const auto r = dgiso::verify_ray_optimality(d, A);
      EXPECT_TRUE(r.passed) << a2 << ' ' << A << ' ' << r.witnesses.dump();
    }
  }
}

TEST(RayOptimality, CandidatesMatchBruteForceScoring) {
  const DoubleGaussian d(0.25);
  const double A = 0.3;
  const auto ray = dgiso::ray_for_mass(d, A);
  for (const auto& sc : dgiso::score_candidates(d, A)) {
    double P = 0.0;
    for (double p : sc.config.points) P += oracle::density(0.25, p);
    EXPECT_NEAR(sc.config.perimeter, P, 1e-13);
    EXPECT_NEAR(sc.gap, P - ray.perimeter, 1e-13);
    EXPECT_GE(sc.gap, -1e-12);
  }
}

TEST(RayOptimality, UnclassifiedShapesAreUnstable) {
  int others = 0;
  for (double a2 : {0.16, 0.5, 0.75})
    for (double A : {0.1, 0.2, 0.3, 0.4})
      for (const auto& sc : dgiso::score_candidates(DoubleGaussian(a2), A)) {
        if (sc.candidate.tag != dgiso::CandidateTag::Other) continue;
        ++others;
        EXPECT_TRUE(sc.unstable() || sc.gap > 1e-9) << a2 << ' ' << A;
      }
  EXPECT_GT(others, 0);
}

TEST(RayOptimality, VerdictLabels) {
  dgiso::ScoredCandidate sc;
  sc.config.points = {0.1, 0.2};
  sc.gap = -1.0;
  EXPECT_EQ(dgiso::verdict(sc, 1e-9), "beats_ray");
  sc.gap = 0.0;
  EXPECT_EQ(dgiso::verdict(sc, 1e-9), "tie");
  sc.has_stability = true;
  sc.stability.second_variation_sign = Sign::negative;
  EXPECT_EQ(dgiso::verdict(sc, 1e-9), "unstable");
  sc.stability.second_variation_sign = Sign::positive;
  sc.gap = 0.5;
  EXPECT_EQ(dgiso::verdict(sc, 1e-9), "loses_to_ray");
  sc.config.points = {0.1};
  sc.gap = 0.0;
  EXPECT_EQ(dgiso::verdict(sc, 1e-9), "ray");
}

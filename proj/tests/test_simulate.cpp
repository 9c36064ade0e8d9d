#include <gtest/gtest.h>

#include <algorithm>

#include "symcrit/errors.hpp"
#include "symcrit/simulate.hpp"
#include "test_support.hpp"

using namespace symcrit;

namespace {

cplx exact_levy_estimate(cplx psi, double t) { return -(std::exp(-t * psi) - 1.0) / t; }

}  // namespace

TEST(SdeSimulator, CmsMatchesStableCharacteristicFunction) {
  testing_support::Probe p(3);
  const int n = 200000;
  for (double alpha : {0.6, 1.0, 1.5, 1.9}) {
    std::vector<double> draws(n);
    for (auto& d : draws) d = sample_symmetric_stable(alpha, p.uniform(1e-12, 1.0), -std::log(p.uniform(1e-300, 1.0)));
    for (double u : {0.3, 1.0, 2.0}) {
      double c = 0.0;
      for (double d : draws) c += std::cos(u * d);
      c /= n;
      EXPECT_NEAR(c, std::exp(-std::pow(u, alpha)), 5.0 / std::sqrt(n)) << "alpha = " << alpha << ", u = " << u;
    }
  }
}

TEST(SdeSimulator, CauchyQuartiles) {
  EXPECT_NEAR(sample_symmetric_stable(1.0, 0.75, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(sample_symmetric_stable(1.0, 0.25, 1.0), -1.0, 1e-12);
  EXPECT_EQ(sample_symmetric_stable(1.5, 0.5, 1.0), 0.0);
}

TEST(SdeSimulator, PathIsDeterministicAndLandsOnEnd) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  const auto a = simulate_path(spec, vec1(0.5), 1.05, 0.1, 9);
  const auto b = simulate_path(spec, vec1(0.5), 1.05, 0.1, 9);
  const auto c = simulate_path(spec, vec1(0.5), 1.05, 0.1, 10);
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(a.front().t, 0.0);
  EXPECT_EQ(a.front().x(0), 0.5);
  EXPECT_DOUBLE_EQ(a.back().t, 1.05);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].x(0), b[i].x(0));
  EXPECT_NE(a.back().x(0), c.back().x(0));
}

TEST(SdeSimulator, DeterministicDecayIsExplicitEuler) {
  const auto spec = SDESpec::ornstein_uhlenbeck(2.0, 0.0);
  const auto path = simulate_path(spec, vec1(3.0), 1.0, 0.01, 1);
  EXPECT_NEAR(path.back().x(0), 3.0 * std::pow(1.0 - 0.02, 100), 1e-12);
}

TEST(SdeSimulator, CompoundPoissonClock) {
  SDESpec spec;
  spec.phi = MatrixField::constant(1.0);
  spec.driver = LevyTriplet::atoms({{vec1(1.0), 1.5}, {vec1(-2.0), 0.5}});
  const double t = 2000.0;
  const auto n = count_jump_events(spec, t, 0.5, 4, 0);
  EXPECT_NEAR(static_cast<double>(n), 2.0 * t, 5.0 * std::sqrt(2.0 * t));
}

TEST(SdeSimulator, OuSymbolEstimate) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  const auto est = estimate_symbol(spec, vec1(1.0), vec1(1.0), 0.01, 40000, 42);
  EXPECT_EQ(est.n_paths, 40000);
  EXPECT_EQ(est.t_used, 0.01);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LE(std::abs(est.value - cplx(0.5, 1.0)), 4.0 * est.std_error + 0.03);
}

TEST(SdeSimulator, SymbolEstimateIsReproducible) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  const auto a = estimate_symbol(spec, vec1(0.0), vec1(2.0), 0.05, 1000, 5);
  const auto b = estimate_symbol(spec, vec1(0.0), vec1(2.0), 0.05, 1000, 5);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(SdeSimulator, PureJumpLevyEstimateIsUnbiased) {
  SDESpec spec;
  spec.phi = MatrixField::constant(1.0);
  spec.driver = LevyTriplet::atoms({{vec1(0.5), 2.0}, {vec1(1.5), 1.0}});
  const double t = 0.2, xi = 1.3;
  const auto est = estimate_symbol(spec, vec1(0.0), vec1(xi), t, 40000, 8);
  const cplx want = exact_levy_estimate(levy_exponent(spec.driver, xi), t);
  EXPECT_LE(std::abs(est.value - want), 4.0 * est.std_error);
}

TEST(SdeSimulator, StableDriverEstimateIsUnbiased) {
  SDESpec spec;
  spec.phi = MatrixField::constant(1.0);
  spec.driver = LevyTriplet::stable(1.3, 0.8);
  const double t = 0.1, xi = 1.1;
  const auto est = estimate_symbol(spec, vec1(0.0), vec1(xi), t, 40000, 12);
  const cplx want = exact_levy_estimate(levy_exponent(spec.driver, xi), t);
  EXPECT_LE(std::abs(est.value - want), 4.0 * est.std_error);
}

TEST(SdeSimulator, AnnulusDriverEstimateIsUnbiased) {
  SDESpec spec;
  spec.phi = MatrixField::constant(1.0);
  spec.driver = LevyTriplet(vec1(0.2), Mat::Zero(1, 1),
                            AnnulusJumps([](double y) { return std::exp(-std::abs(y)) / (y * y); }, 0.3, 3.0, 0.05));
  const double t = 0.1, xi = 1.4;
  const auto est = estimate_symbol(spec, vec1(0.0), vec1(xi), t, 40000, 21, 0.1);
  const cplx want = exact_levy_estimate(levy_exponent(spec.driver, xi), t);
  EXPECT_LE(std::abs(est.value - want), 4.0 * est.std_error + 5e-3);
}

TEST(SdeSimulator, EmpiricalOuVariance) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  EmpiricalLawOptions opts;
  opts.n_samples = 8000;
  opts.sample_gap = 2.0;
  opts.dt = 0.01;
  opts.burn_in = 5.0;
  opts.chains = 4;
  const auto mu = empirical_law(spec, vec1(0.0), opts);
  const auto& pts = std::get<Measure::Samples>(mu.variant()).points;
  ASSERT_EQ(pts.size(), 8000u);
  double s = 0.0, ss = 0.0;
  for (const auto& x : pts) {
    s += x(0);
    ss += x(0) * x(0);
  }
  const double mean = s / pts.size(), var = ss / pts.size() - mean * mean;
  // Euler stationary variance is sigma^2 dt / (1 - (1 - lambda dt)^2).
  const double euler = 0.01 / (1.0 - 0.99 * 0.99);
  EXPECT_NEAR(var, euler, 0.1 * euler);
  EXPECT_NEAR(mean, 0.0, 0.06);
}

TEST(SdeSimulator, BlowUpIsReported) {
  SDESpec spec = SDESpec::ornstein_uhlenbeck(-1000.0, 0.0);
  try {
    simulate_path(spec, vec1(1.0), 10.0, 0.01, 1);
    FAIL() << "expected a SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_LT(e.step(), 1000u);
  }
}

TEST(SdeSimulator, InputValidation) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  EXPECT_THROW(estimate_symbol(spec, vec1(0.0), vec1(1.0), 0.01, 99, 1), InputError);
  EXPECT_THROW(estimate_symbol(spec, vec1(0.0), vec1(1.0), 0.0, 1000, 1), InputError);
  EXPECT_THROW(simulate_path(spec, vec1(0.0), 1.0, 0.0, 1), InputError);
  EXPECT_THROW(simulate_path(spec, Vec::Zero(2), 1.0, 0.1, 1), InputError);
  SDESpec stable2;
  stable2.dim = 2;
  stable2.phi = MatrixField::constant(Mat::Identity(2, 2));
  stable2.driver = LevyTriplet::stable(1.5, 1.0, 2);
  EXPECT_THROW(stable2.validate(), InputError);
}

TEST(SdeSimulator, SpecSymbols) {
  const auto ou = SDESpec::ornstein_uhlenbeck(1.5, 0.7).symbol();
  const auto ref = symbol_ou_type(1.5, MatrixField::constant(0.7), LevyTriplet::brownian(1.0));
  const auto sn = SDESpec::stable_noise(0.5, 0.3, 1.2, [](double x) { return -x; }).symbol();
  const auto sn_ref = symbol_stable_noise(0.5, 0.3, 1.2, [](const Vec& x) { return Vec(-x); });
  for (double x : {-1.0, 0.4}) {
    for (double xi : {-2.0, 0.9}) {
      EXPECT_LE(std::abs(ou(x, xi) - ref(x, xi)), 1e-14);
      EXPECT_LE(std::abs(sn(x, xi) - sn_ref(x, xi)), 1e-12);
    }
  }
}

TEST(SdeSimulator, WeakConvergenceAsTimeHalves) {
  const auto spec = SDESpec::ornstein_uhlenbeck(1.0, 1.0);
  const cplx target(0.5, 1.0);
  double prev_gap = 0.0, prev_se = 0.0;
  bool first = true;
  for (double t : {1e-2, 5e-3, 2.5e-3}) {
    const auto est = estimate_symbol(spec, vec1(1.0), vec1(1.0), t, 50000, 77);
    const double gap = std::abs(est.value - target);
    if (!first) EXPECT_LE(gap, prev_gap + 3.0 * std::hypot(prev_se, est.std_error)) << "t = " << t;
    prev_gap = gap;
    prev_se = est.std_error;
    first = false;
  }
}

TEST(SdeSimulator, JumpCountWithinThreeStandardErrors) {
  SDESpec spec;
  spec.phi = MatrixField::constant(1.0);
  spec.driver = LevyTriplet::atoms({{vec1(1.0), 0.7}, {vec1(-0.5), 0.3}});
  const double t = 5000.0;
  for (std::uint64_t stream : {0u, 1u, 2u}) {
    const auto n = static_cast<double>(count_jump_events(spec, t, 1.0, 99, stream));
    EXPECT_NEAR(n, t, 3.0 * std::sqrt(t)) << "stream " << stream;
  }
}

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "symcrit/criterion.hpp"
#include "symcrit/errors.hpp"
#include "test_support.hpp"

using namespace symcrit;
using testing_support::gaussian_moment_transform;
using testing_support::Probe;

namespace {

Symbol ou(double lambda, double sigma) {
  return symbol_ou_type(lambda, MatrixField::constant(sigma), LevyTriplet::brownian(1.0));
}

// S(xi) for the OU symbol and N(m, v), written out from Gaussian moments.
cplx ou_residual_oracle(double lambda, double sigma, double m, double v, double xi) {
  return 0.5 * sigma * sigma * xi * xi * gaussian_moment_transform(m, v, xi, 0) +
         cplx(0.0, lambda * xi) * gaussian_moment_transform(m, v, xi, 1);
}

}  // namespace

TEST(CriterionEngine, OuStationaryLawClosedForm) {
  const auto report = residual_profile(ou(1.0, 1.0), Measure::gaussian(0.0, 0.5), default_grid());
  EXPECT_LE(report.max_abs, 1e-12);
  EXPECT_EQ(report.verdict, Verdict::ConsistentWithInvariance);
  EXPECT_EQ(report.points.size(), 101u);
}

TEST(CriterionEngine, OuStationaryLawByQuadrature) {
  CriterionOptions opts;
  opts.transform.allow_closed_form = false;
  const auto report = residual_profile(ou(1.0, 1.0), Measure::gaussian(0.0, 0.5), default_grid(), opts);
  EXPECT_LE(report.max_abs, 1e-6);
  EXPECT_EQ(report.verdict, Verdict::ConsistentWithInvariance);
}

TEST(CriterionEngine, WrongVarianceIsRejected) {
  const auto sym = ou(1.0, 1.0);
  const auto mu = Measure::gaussian(0.0, 1.0);
  const double at = std::sqrt(2.0);
  EXPECT_NEAR(std::abs(residual(sym, mu, at).value), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(std::abs(residual(sym, mu, -at).value), std::exp(-1.0), 1e-12);
  const auto report = residual_profile(sym, mu, default_grid());
  // The grid does not contain sqrt(2); its maximum sits at xi = 1.4.
  EXPECT_NEAR(report.max_abs, std::exp(-1.0), 1e-3);
  EXPECT_EQ(report.verdict, Verdict::Violated);
  EXPECT_FALSE(report.hypothesis_notes.empty());
}

TEST(CriterionEngine, BrownianMotionHasNoInvariantLaw) {
  const auto s = residual(symbol_levy(LevyTriplet::brownian(1.0)), Measure::gaussian(0.0, 1.0), 1.0);
  EXPECT_NEAR(s.value.real(), 0.5 * std::exp(-0.5), 1e-12);
  EXPECT_NEAR(s.value.imag(), 0.0, 1e-12);
}

TEST(CriterionEngine, ZeroSymbolAcceptsAnything) {
  const auto report = residual_profile(symbol_zero(), Measure::density([](double x) { return 1.0 + x * x; }, -1, 1),
                                       default_grid());
  EXPECT_EQ(report.max_abs, 0.0);
  EXPECT_EQ(report.verdict, Verdict::ConsistentWithInvariance);
}

TEST(CriterionEngine, TwoDimensionalOu) {
  const auto sym = symbol_ou_type(1.0, MatrixField::constant(Mat::Identity(2, 2)), LevyTriplet::brownian(Mat::Identity(2, 2)));
  const auto good = Measure::gaussian(Vec::Zero(2), Vec::Constant(2, 0.5));
  const auto bad = Measure::gaussian(Vec::Zero(2), Vec::Constant(2, 1.0));
  std::vector<Vec> grid;
  for (double a : {-1.5, 0.0, 1.0}) {
    for (double b : {-0.5, 2.0}) {
      Vec xi(2);
      xi << a, b;
      grid.push_back(xi);
    }
  }
  const auto ok = residual_profile(sym, good, grid);
  EXPECT_LE(ok.max_abs, 1e-8);
  EXPECT_EQ(ok.verdict, Verdict::ConsistentWithInvariance);
  EXPECT_EQ(residual_profile(sym, bad, grid).verdict, Verdict::Violated);
}

TEST(CriterionEngine, FailedPointsGiveInconclusive) {
  const auto sym = symbol_custom(1, [](const Vec&, const Vec& xi) -> cplx {
    if (xi(0) > 4.0) throw EvaluationError("synthetic failure");
    return 0.0;
  });
  const auto report = residual_profile(sym, Measure::gaussian(0.0, 1.0), default_grid());
  EXPECT_EQ(report.verdict, Verdict::Inconclusive);
  int failed = 0;
  for (const auto& p : report.points) failed += p.failed ? 1 : 0;
  EXPECT_EQ(failed, 10);
  EXPECT_FALSE(report.points.back().failure.empty());
}

TEST(CriterionEngine, ClassifyRule) {
  auto point = [](double v, double err, bool failed = false) {
    ResidualPoint p;
    p.xi = vec1(0.0);
    p.residual = {cplx(v, 0.0), err};
    p.failed = failed;
    return p;
  };
  EXPECT_EQ(classify({point(1e-7, 0.0)}, 1e-6), Verdict::ConsistentWithInvariance);
  EXPECT_EQ(classify({point(2e-6, 0.0)}, 1e-6), Verdict::Violated);
  EXPECT_EQ(classify({point(2e-6, 1e-6)}, 1e-6), Verdict::ConsistentWithInvariance);
  EXPECT_EQ(classify({point(0.0, 0.0), point(0.0, 0.0, true)}, 1e-6), Verdict::Inconclusive);
  EXPECT_EQ(classify({point(1.0, 0.0), point(0.0, 0.0, true)}, 1e-6), Verdict::Violated);
}

TEST(CriterionEngine, CheckInvarianceShortcut) {
  EXPECT_EQ(check_invariance(ou(2.0, 1.0), Measure::gaussian(0.0, 0.25), default_grid(), 1e-8),
            Verdict::ConsistentWithInvariance);
  EXPECT_EQ(check_invariance(ou(2.0, 1.0), Measure::gaussian(0.1, 0.25), default_grid(), 1e-8), Verdict::Violated);
}

TEST(CriterionEngine, GouRelationReducesToOu) {
  const double lambda = 0.7, sigma = 1.2;
  const auto mu = Measure::gaussian(0.0, sigma * sigma / (2.0 * lambda));
  const auto u = LevyTriplet::pure_drift(-lambda);
  const auto l = LevyTriplet::brownian(sigma * sigma);
  const auto wrong = Measure::gaussian(0.3, 1.0);
  for (double xi : linspace(-5.0, 5.0, 41)) {
    EXPECT_LE(std::abs(gou_relation_residual(u, l, mu, xi).value), 1e-12);
    const cplx a = gou_relation_residual(u, l, wrong, xi).value;
    const cplx b = residual(ou(lambda, sigma), wrong, xi).value;
    EXPECT_LE(std::abs(a - b), 1e-8);
  }
}

TEST(CriterionEngine, AlbeverioSechDensity) {
  const auto rho = Measure::density([](double x) { return 1.0 / (std::numbers::pi * std::cosh(x)); }, -40.0, 40.0);
  auto beta = [](double x) { return -std::tanh(x); };
  for (double xi : linspace(-5.0, 5.0, 21)) {
    EXPECT_LE(std::abs(albeverio_residual(1.0, 0.0, 1.5, beta, rho, xi).value), 1e-6) << "xi = " << xi;
  }
  // Wrong drift strength is detected.
  auto beta2 = [](double x) { return -2.0 * std::tanh(x); };
  EXPECT_GT(std::abs(albeverio_residual(1.0, 0.0, 1.5, beta2, rho, 1.0).value), 1e-2);
  EXPECT_THROW(albeverio_residual(1.0, 0.0, 1.5, beta, Measure::gaussian(0.0, 1.0), 1.0), InputError);
}

TEST(CriterionEngine, AlbeverioMatchesIndependentFourierQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  const double a1 = 0.6, a2 = 0.4, alpha = 1.2;
  auto f = [](double x) { return std::exp(-x * x) * (1.0 + 0.3 * x) / std::sqrt(std::numbers::pi); };
  auto beta = [](double x) { return std::sin(x); };
  const auto rho = Measure::density(f, -9.0, 9.0, Measure::Normalization::Normalize);
  const double c = stable_constant(alpha, 1);
  for (double xi : {-2.0, 0.5, 3.0}) {
    auto hat = [&](const std::function<double(double)>& h) {
      double re = 0.0, im = 0.0;
      for (int k = 0; k < 36; ++k) {
        const double a = -9.0 + 0.5 * k, b = a + 0.5;
        re += gauss_kronrod<double, 61>::integrate([&](double x) { return std::cos(x * xi) * h(x); }, a, b, 8, 1e-14);
        im -= gauss_kronrod<double, 61>::integrate([&](double x) { return std::sin(x * xi) * h(x); }, a, b, 8, 1e-14);
      }
      return cplx(re, im);
    };
    const cplx want = (a1 * xi * xi - a2 * c * std::pow(std::abs(xi), alpha)) * hat(f) +
                      cplx(0.0, xi) * hat([&](double x) { return beta(x) * f(x); });
    EXPECT_LE(std::abs(albeverio_residual(a1, a2, alpha, beta, rho, xi).value - want), 1e-8) << "xi = " << xi;
  }
}

TEST(CriterionEngine, FactorizingCheck) {
  const auto rho = Measure::density([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  const auto grid = linspace(-3.0, 3.0, 61);
  const auto bad = factorizing_check([](double x) { return 1.0 + x * x; }, rho, grid);
  EXPECT_EQ(bad.verdict, FactorizingVerdict::Incompatible);
  EXPECT_NEAR(bad.argmax, 0.0, 0.2);
  const auto vanishing = factorizing_check([](double x) { return std::abs(x) > 7.0 ? 1.0 : 0.0; }, rho, grid);
  EXPECT_EQ(vanishing.verdict, FactorizingVerdict::Compatible);
  EXPECT_EQ(vanishing.max_product, 0.0);
}

TEST(CriterionEngine, Linspace) {
  const auto g = linspace(-5.0, 5.0, 101);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), -5.0);
  EXPECT_EQ(g.back(), 5.0);
  EXPECT_NEAR(g[50], 0.0, 1e-15);
  EXPECT_EQ(default_grid(), g);
}

TEST(CriterionProperties, OuFamilyMatchesOracle) {
  Probe p(31);
  for (int k = 0; k < 200; ++k) {
    const double lambda = p.uniform(0.1, 3.0), sigma = p.uniform(0.1, 2.0);
    const double m = p.uniform(-1.0, 1.0), v = p.uniform(0.05, 2.0), xi = p.uniform(-5.0, 5.0);
    const auto got = residual(ou(lambda, sigma), Measure::gaussian(m, v), xi).value;
    EXPECT_LE(std::abs(got - ou_residual_oracle(lambda, sigma, m, v, xi)), 1e-12);
    const auto stationary = residual(ou(lambda, sigma), Measure::gaussian(0.0, sigma * sigma / (2 * lambda)), xi);
    EXPECT_LE(std::abs(stationary.value), 1e-12);
  }
}

TEST(CriterionProperties, ResidualIsLinearInTheSymbol) {
  Probe p(37);
  const auto mu = Measure::density([](double x) { return std::exp(-std::abs(x)); }, -25.0, 25.0);
  for (int k = 0; k < 20; ++k) {
    const double a = p.uniform(0.1, 2.0), s = p.uniform(0.1, 2.0), xi = p.uniform(-4.0, 4.0);
    const auto s1 = ou(a, s);
    const auto s2 = symbol_levy(LevyTriplet::atoms({{vec1(0.7), 1.0}}));
    const auto sum = symbol_custom(1, [&](const Vec& x, const Vec& z) { return s1(x, z) + s2(x, z); });
    const cplx lhs = residual(sum, mu, xi).value;
    const cplx rhs = residual(s1, mu, xi).value + residual(s2, mu, xi).value;
    EXPECT_LE(std::abs(lhs - rhs), 1e-8);
  }
}

TEST(CriterionProperties, ConjugateSymmetryAndWiring) {
  Probe p(43);
  const auto sym = symbol_ou_type(0.8, MatrixField::scalar([](double x) { return 1.0 + 0.5 * std::sin(x); }, true),
                                  LevyTriplet::atoms({{vec1(0.4), 1.0}, {vec1(-1.2), 0.5}}, 0.0, 0.3));
  const auto mu = Measure::density([](double x) { return std::exp(-x * x / 3.0) * (1.0 + 0.2 * x); }, -12.0, 12.0);
  for (double xi : linspace(-5.0, 5.0, 21)) {
    const cplx a = residual(sym, mu, xi).value, b = residual(sym, mu, -xi).value;
    EXPECT_LE(std::abs(b - std::conj(a)), 1e-10) << "xi = " << xi;
    WeightFunction g{[&](const Vec& x) { return symbol_eval(sym, x, vec1(xi)); }, std::nullopt};
    EXPECT_LE(std::abs(weighted_transform(mu, g, xi).value - a), 1e-15);
  }
  EXPECT_EQ(residual(sym, mu, 0.0).value, cplx(0.0, 0.0));
}

TEST(CriterionProperties, RefinementStaysWithinErrorEstimate) {
  const auto sym = ou(1.0, 1.0);
  const auto mu = Measure::gaussian(0.1, 0.7);
  TransformOptions coarse;
  coarse.allow_closed_form = false;
  coarse.rel_tol = 1e-6;
  TransformOptions fine = coarse;
  fine.panel_scale = 0.5;
  fine.rel_tol = 1e-9;
  for (double xi : linspace(-5.0, 5.0, 21)) {
    const cplx ref = residual(sym, mu, xi).value;
    const auto c = residual(sym, mu, xi, coarse), f = residual(sym, mu, xi, fine);
    EXPECT_LE(std::abs(f.value - ref), std::abs(c.value - ref) + c.error_estimate + 1e-15) << "xi = " << xi;
  }
}

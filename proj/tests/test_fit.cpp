#include <gtest/gtest.h>

#include "symcrit/errors.hpp"
#include "symcrit/fit.hpp"
#include "test_support.hpp"

using namespace symcrit;

namespace {

FitProblem ou_problem(Convention c) {
  return FitProblem{symbol_diffusion(1.0, MatrixField::constant(1.0), c), MeasureFamily::gaussian(-1.0, 1.0, 0.01, 10.0)};
}

}  // namespace

TEST(FitSolver, RecoversCanonicalOuVariance) {
  const auto r = fit_invariant(ou_problem(Convention::Canonical));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.params(0), 0.0, 1e-6);
  EXPECT_NEAR(r.params(1), 0.5, 1e-6);
  EXPECT_LE(r.objective_value, 1e-10);
  EXPECT_GT(r.iterations, 0);
}

TEST(FitSolver, RecoversDoubledOuVariance) {
  const auto r = fit_invariant(ou_problem(Convention::Doubled));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.params(1), 1.0, 1e-6);
}

TEST(FitSolver, L2ObjectiveAndFixedMean) {
  auto problem = ou_problem(Convention::Canonical);
  problem.family = MeasureFamily::gaussian(0.0, 0.0, 0.01, 10.0);
  problem.objective = Objective::L2;
  const auto r = fit_invariant(problem);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.params(0), 0.0);
  EXPECT_NEAR(r.params(1), 0.5, 1e-6);
}

TEST(FitSolver, StochasticExponentialDoesNotConverge) {
  FitProblem problem{symbol_diffusion(0.0, MatrixField::affine(0.0, 1.0)), MeasureFamily::gaussian(-1.0, 1.0, 0.01, 10.0)};
  const auto r = fit_invariant(problem);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.objective_value, 1e-3);
  for (int i = 0; i < 2; ++i) {
    EXPECT_GE(r.params(i), problem.family.lower()(i));
    EXPECT_LE(r.params(i), problem.family.upper()(i));
  }
}

TEST(FitSolver, DeterministicForSeed) {
  FitProblem problem{symbol_diffusion(0.0, MatrixField::affine(0.0, 1.0)), MeasureFamily::gaussian(-1.0, 1.0, 0.01, 10.0)};
  FitOptions opts;
  opts.max_iter = 80;
  const auto a = fit_invariant(problem, opts);
  const auto b = fit_invariant(problem, opts);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(FitSolver, ObjectiveValues) {
  const auto problem = ou_problem(Convention::Canonical);
  Vec good(2), bad(2);
  good << 0.0, 0.5;
  bad << 0.0, 1.0;
  EXPECT_LE(fit_objective(problem, good), 1e-12);
  EXPECT_NEAR(fit_objective(problem, bad), 0.367805, 1e-5);
  auto failing = problem;
  failing.symbol = symbol_custom(1, [](const Vec&, const Vec&) -> cplx { throw EvaluationError("nope"); });
  EXPECT_TRUE(std::isinf(fit_objective(failing, good)));
  auto weighted = problem;
  weighted.weights.assign(problem.grid.size(), 2.0);
  EXPECT_NEAR(fit_objective(weighted, bad), 2.0 * fit_objective(problem, bad), 1e-12);
  weighted.weights.resize(3);
  EXPECT_THROW(fit_objective(weighted, bad), InputError);
}

TEST(FitSolver, FamilyValidation) {
  EXPECT_THROW(MeasureFamily::gaussian(1.0, -1.0, 0.1, 1.0), InputError);
  EXPECT_THROW(MeasureFamily::gaussian(0.0, 1.0, 0.0, 1.0), InputError);
  EXPECT_EQ(MeasureFamily::gaussian(0.0, 1.0, 0.1, 1.0).names(), (std::vector<std::string>{"mean", "variance"}));
}

TEST(FitSolver, OuVarianceOde) {
  EXPECT_DOUBLE_EQ(ou_variance_ode_solve(1.0, 1.0, Convention::Canonical), 0.5);
  EXPECT_DOUBLE_EQ(ou_variance_ode_solve(1.0, 1.0, Convention::Doubled), 1.0);
  EXPECT_DOUBLE_EQ(ou_variance_ode_solve(2.0, 3.0, Convention::Canonical), 9.0 / 4.0);
  EXPECT_THROW(ou_variance_ode_solve(0.0, 1.0, Convention::Canonical), InputError);
}

TEST(FitProperties, RandomOuInstances) {
  testing_support::Probe p(59);
  for (int k = 0; k < 6; ++k) {
    const double lambda = p.uniform(0.3, 2.0), sigma = p.uniform(0.5, 1.5);
    const auto conv = p.coin() ? Convention::Canonical : Convention::Doubled;
    FitProblem problem{symbol_diffusion(lambda, MatrixField::constant(sigma), conv),
                       MeasureFamily::gaussian(-1.0, 1.0, 0.01, 10.0), linspace(-3.0, 3.0, 31)};
    const auto r = fit_invariant(problem);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.params(1), ou_variance_ode_solve(lambda, sigma, conv), 1e-5);
  }
}

TEST(FitProperties, UniformWeightScalingKeepsTheArgmin) {
  auto problem = ou_problem(Convention::Canonical);
  problem.objective = Objective::L2;
  const auto plain = fit_invariant(problem);
  problem.weights.assign(problem.grid.size(), 10.0);
  const auto scaled = fit_invariant(problem);
  EXPECT_NEAR(plain.params(0), scaled.params(0), 1e-3);
  EXPECT_NEAR(plain.params(1), scaled.params(1), 1e-3);
}

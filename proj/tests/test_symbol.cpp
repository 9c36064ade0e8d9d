#include <gtest/gtest.h>

#include <algorithm>

#include "symcrit/errors.hpp"
#include "symcrit/symbol.hpp"
#include "test_support.hpp"

using namespace symcrit;
using testing_support::Probe;

namespace {

void expect_complex_near(cplx got, cplx want, double tol) {
  EXPECT_NEAR(got.real(), want.real(), tol);
  EXPECT_NEAR(got.imag(), want.imag(), tol);
}

bool has_note(const Symbol& s, const std::string& fragment) {
  const auto& n = s.hypothesis_notes();
  return std::any_of(n.begin(), n.end(), [&](const std::string& t) { return t.find(fragment) != std::string::npos; });
}

}  // namespace

TEST(SymbolCore, FromCharacteristicsOuExample) {
  DifferentialCharacteristics chars;
  chars.ell = [](const Vec& x) { return Vec(-x); };
  chars.q = [](const Vec&) { return Mat::Constant(1, 1, 1.0); };
  const auto s = symbol_from_characteristics(chars);
  expect_complex_near(s(1.0, 2.0), cplx(2.0, 2.0), 1e-15);
  EXPECT_EQ(s(0.3, 0.0), cplx(0.0, 0.0));
}

TEST(SymbolCore, FromCharacteristicsStateDependentAtom) {
  DifferentialCharacteristics chars;
  chars.ell = [](const Vec&) { return vec1(0.0); };
  chars.q = [](const Vec&) { return Mat::Zero(1, 1); };
  chars.jumps = [](const Vec& x) -> JumpMeasure {
    return AtomicJumps({{vec1(2.0), std::min(std::abs(x(0)), 1.0)}});
  };
  const auto s = symbol_from_characteristics(chars);
  expect_complex_near(s(1.0, std::numbers::pi / 2.0), cplx(2.0, 0.0), 1e-14);
}

TEST(SymbolCore, FromCharacteristicsRejectsNonPsdAtProbe) {
  DifferentialCharacteristics chars;
  chars.ell = [](const Vec&) { return vec1(0.0); };
  chars.q = [](const Vec& x) { return Mat::Constant(1, 1, x(0)); };
  const auto s = symbol_from_characteristics(chars);
  EXPECT_NO_THROW(s(1.0, 1.0));
  EXPECT_THROW(s(-1.0, 1.0), InputError);
}

TEST(SymbolCore, OuTypeBrownian) {
  const auto s = symbol_ou_type(1.0, MatrixField::constant(1.0), LevyTriplet::brownian(1.0));
  expect_complex_near(s(1.0, 1.0), cplx(0.5, 1.0), 1e-15);
}

TEST(SymbolCore, OuTypeStable) {
  const double lambda = 0.8, alpha = 1.3;
  const auto s = symbol_ou_type(lambda, MatrixField::constant(1.0), LevyTriplet::stable(alpha, 1.0));
  for (double x : {-1.0, 0.5, 2.0}) {
    for (double xi : {-2.0, 0.7, 3.0}) {
      expect_complex_near(s(x, xi), cplx(std::pow(std::abs(xi), alpha), lambda * x * xi), 1e-13);
    }
  }
}

TEST(SymbolCore, OuTypeDimensionMismatch) {
  EXPECT_THROW(symbol_ou_type(1.0, MatrixField::constant(Mat::Identity(2, 2)), LevyTriplet::brownian(1.0)),
               InputError);
  const auto s = symbol_ou_type(1.0, MatrixField::constant(1.0), LevyTriplet::brownian(1.0));
  EXPECT_THROW(s(Vec::Zero(2), Vec::Zero(2)), InputError);
}

TEST(SymbolCore, AdditiveXIndependent) {
  const auto s = symbol_additive(1.0, MatrixField::constant(0.0), LevyTriplet::brownian(1.0),
                                 LevyTriplet::brownian(2.0));
  for (double x : {-3.0, 0.0, 4.0}) expect_complex_near(s(x, 1.5), cplx(2.25, 0.0), 1e-14);
}

TEST(SymbolCore, StableNoiseForm) {
  const double a1 = 1.0, a2 = 0.7, alpha = 1.4;
  const auto beta = [](const Vec& x) { return Vec(-x.array().tanh().matrix()); };
  const auto s = symbol_stable_noise(a1, a2, alpha, beta);
  const double c = stable_constant(alpha, 1);
  for (double x : {-1.0, 0.3}) {
    for (double xi : {-2.0, 1.1}) {
      const cplx expected(a1 * xi * xi - a2 * c * std::pow(std::abs(xi), alpha), std::tanh(x) * xi);
      expect_complex_near(s(x, xi), expected, 1e-12);
    }
  }
}

TEST(SymbolCore, DiffusionCanonicalAndDoubled) {
  const auto canonical = symbol_diffusion(1.0, MatrixField::constant(1.0));
  expect_complex_near(canonical(1.0, 1.0), cplx(0.5, 1.0), 1e-15);
  const auto stoch_exp = symbol_diffusion(0.0, MatrixField::affine(0.0, 1.0), Convention::Doubled);
  expect_complex_near(stoch_exp(2.0, 3.0), cplx(36.0, 0.0), 1e-13);
  EXPECT_TRUE(has_note(stoch_exp, "doubled convention"));
}

TEST(SymbolCore, GouReductions) {
  const double lambda = 1.3, sigma = 0.8;
  const auto s = symbol_gou(LevyTriplet::pure_drift(-lambda), LevyTriplet::brownian(sigma * sigma));
  expect_complex_near(s(0.4, 1.7), cplx(0.5 * sigma * sigma * 1.7 * 1.7, lambda * 0.4 * 1.7), 1e-14);
  const auto degenerate = symbol_gou(LevyTriplet::zero(), LevyTriplet::stable(1.5));
  EXPECT_EQ(degenerate(-3.0, 2.0), degenerate(5.0, 2.0));
  EXPECT_THROW(symbol_gou(LevyTriplet::brownian(Mat::Identity(2, 2)), LevyTriplet::brownian(1.0)), InputError);
}

TEST(SymbolCore, LevySymbolIsXIndependent) {
  const auto s = symbol_levy(LevyTriplet::brownian(1.0));
  expect_complex_near(symbol_eval(s, vec1(7.0), vec1(2.0)), cplx(2.0, 0.0), 1e-15);
}

TEST(SymbolCore, XPolynomialMatchesEvaluation) {
  Probe p(5);
  std::vector<Symbol> symbols{
      symbol_diffusion(0.7, MatrixField::affine(0.3, -1.2)),
      symbol_ou_type(1.1, MatrixField::affine(0.5, 0.4), LevyTriplet(vec1(0.3), Mat::Constant(1, 1, 2.0))),
      symbol_ou_type(0.4, MatrixField::constant(1.5), LevyTriplet::atoms({{vec1(0.6), 1.0}})),
      symbol_gou(LevyTriplet(vec1(-0.4), Mat::Constant(1, 1, 0.5)), LevyTriplet::stable(0.8)),
      symbol_additive(0.5, MatrixField::affine(1.0, 2.0), LevyTriplet::brownian(1.0), LevyTriplet::stable(1.2)),
      symbol_levy(LevyTriplet::atoms({{vec1(2.0), 0.5}}, 0.1, 0.3)),
      symbol_zero(),
  };
  for (const auto& s : symbols) {
    ASSERT_TRUE(s.has_x_polynomial());
    for (int k = 0; k < 50; ++k) {
      const double x = p.uniform(-4.0, 4.0), xi = p.uniform(-5.0, 5.0);
      const auto c = s.x_polynomial(xi);
      const cplx poly = c[0] + c[1] * x + c[2] * x * x;
      EXPECT_LE(std::abs(poly - s(x, xi)), 1e-12 * std::max(1.0, std::abs(poly)));
    }
  }
}

TEST(SymbolCore, HypothesisNotes) {
  const auto unbounded = symbol_ou_type(1.0, MatrixField::scalar([](double x) { return x; }), LevyTriplet::brownian(1.0));
  EXPECT_TRUE(has_note(unbounded, "bounded"));
  const auto heavy = symbol_ou_type(1.0, MatrixField::constant(1.0), LevyTriplet::stable(0.8));
  EXPECT_TRUE(has_note(heavy, "alpha"));
  const auto chars = symbol_stable_noise(1.0, 1.0, 1.5, [](const Vec& x) { return Vec(-x); });
  EXPECT_TRUE(has_note(chars, "fine continuity"));
}

TEST(SymbolCore, DimensionCheckOnEvaluation) {
  const auto s = symbol_levy(LevyTriplet::brownian(Mat::Identity(2, 2)));
  EXPECT_THROW(s(Vec::Zero(2), Vec::Zero(3)), InputError);
  EXPECT_THROW(s(Vec::Zero(1), Vec::Zero(2)), InputError);
}

TEST(SymbolProperties, CrossConstructions) {
  Probe p(61);
  for (int k = 0; k < 200; ++k) {
    const double a = p.uniform(0.0, 3.0), c0 = p.uniform(-1.0, 1.0), c1 = p.uniform(-1.0, 1.0);
    const auto phi = MatrixField::affine(c0, c1);
    DifferentialCharacteristics chars;
    chars.ell = [a](const Vec& x) { return Vec(-a * x); };
    chars.q = [phi](const Vec& x) {
      const Mat m = phi(x);
      return Mat(m * m.transpose());
    };
    const auto diffusion = symbol_diffusion(a, phi);
    const auto ou = symbol_ou_type(a, phi, LevyTriplet::brownian(1.0));
    const auto from_chars = symbol_from_characteristics(chars);
    const auto l = LevyTriplet::stable(p.uniform(0.2, 1.9), p.uniform(0.1, 2.0));
    const auto gou = symbol_gou(LevyTriplet::pure_drift(-a), l);
    const auto ou_l = symbol_ou_type(a, MatrixField::constant(1.0), l);
    const double x = p.uniform(-3.0, 3.0), xi = p.uniform(-5.0, 5.0);
    const cplx ref = diffusion(x, xi);
    const double scale = std::max(1.0, std::abs(ref));
    EXPECT_LE(std::abs(ou(x, xi) - ref), 1e-12 * scale);
    EXPECT_LE(std::abs(from_chars(x, xi) - ref), 1e-12 * scale);
    EXPECT_LE(std::abs(gou(x, xi) - ou_l(x, xi)), 1e-12 * std::max(1.0, std::abs(ou_l(x, xi))));
  }
}

TEST(SymbolProperties, ZeroConjugateAndNonnegativeReal) {
  Probe p(67);
  const std::vector<Symbol> symbols{
      symbol_diffusion(1.2, MatrixField::affine(0.3, 0.8)),
      symbol_ou_type(0.5, MatrixField::constant(2.0), LevyTriplet::stable(1.1)),
      symbol_gou(LevyTriplet(vec1(0.2), Mat::Constant(1, 1, 0.4)), LevyTriplet::atoms({{vec1(0.6), 1.0}})),
      symbol_additive(0.7, MatrixField::constant(1.0), LevyTriplet::brownian(1.0), LevyTriplet::stable(0.5)),
      symbol_stable_noise(0.5, 0.5, 1.5, [](const Vec& x) { return Vec(-x.array().tanh().matrix()); }),
  };
  for (const auto& s : symbols) {
    for (int k = 0; k < 100; ++k) {
      const double x = p.uniform(-4.0, 4.0), xi = p.uniform(-6.0, 6.0);
      EXPECT_EQ(s(x, 0.0), cplx(0.0, 0.0));
      const cplx v = s(x, xi);
      EXPECT_GE(v.real(), -1e-10);
      EXPECT_LE(std::abs(s(x, -xi) - std::conj(v)), 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
}

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcrit/levy.hpp"
#include "symcrit/types.hpp"

namespace symcrit {

enum class SymbolForm { FromCharacteristics, LevyConstant, OuType, Additive, Diffusion, Gou, Custom };

/// Normalization of the Gaussian part. Canonical uses xi'Q xi / 2, so a Brownian
/// motion has exponent u^2/2. Doubled gives the diffusion symbol
/// |Phi(x)'xi|^2 + i a x'xi without the factor 1/2.
enum class Convention { Canonical, Doubled };

const char* to_string(SymbolForm form);
const char* to_string(Convention c);

/// Coefficients c_0, c_1, c_2 of a one-dimensional symbol that is a polynomial
/// in x: p(x, xi) = c_0(xi) + c_1(xi) x + c_2(xi) x^2.
using XPolynomial = std::array<cplx, 3>;

/// Coefficient map x -> Phi(x) in R^{d x n}.
class MatrixField {
 public:
  using Fn = std::function<Mat(const Vec&)>;

  MatrixField() = default;
  MatrixField(Fn fn, int rows, int cols, bool bounded = false);

  static MatrixField constant(const Mat& value);
  static MatrixField constant(double value);
  /// Phi(x) = c0 + c1 x on R (d = n = 1).
  static MatrixField affine(double c0, double c1);
  static MatrixField scalar(std::function<double(double)> fn, bool bounded = false);

  Mat operator()(const Vec& x) const;
  double scalar_at(double x) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool declared_bounded() const { return bounded_; }
  /// (c0, c1) when the field is declared affine in one dimension.
  const std::optional<std::array<double, 2>>& affine_coefficients() const { return affine_; }
  bool is_constant() const { return affine_ && (*affine_)[1] == 0.0; }

 private:
  Fn fn_;
  int rows_ = 1;
  int cols_ = 1;
  bool bounded_ = false;
  std::optional<std::array<double, 2>> affine_;
  std::function<double(double)> scalar_fn_;
};

/// Densities (l(x), Q(x), N(x, dy)) of the semimartingale characteristics.
struct DifferentialCharacteristics {
  int dim = 1;
  std::function<Vec(const Vec&)> ell;
  std::function<Mat(const Vec&)> q;
  /// Optional; empty means no jumps.
  std::function<JumpMeasure(const Vec&)> jumps;
  /// Whether the characteristics are declared globally bounded.
  bool bounded = false;
};

/// Evaluable probabilistic symbol p(x, xi) with structural metadata.
class Symbol {
 public:
  using EvalFn = std::function<cplx(const Vec&, const Vec&)>;
  using PolyFn = std::function<XPolynomial(double)>;

  Symbol(int dim, SymbolForm form, EvalFn eval, PolyFn x_polynomial = {},
         std::vector<std::string> notes = {});

  cplx operator()(const Vec& x, const Vec& xi) const;
  cplx operator()(double x, double xi) const;

  int dimension() const { return dim_; }
  SymbolForm form() const { return form_; }
  bool has_x_polynomial() const { return static_cast<bool>(poly_); }
  /// Requires has_x_polynomial().
  XPolynomial x_polynomial(double xi) const;
  const std::vector<std::string>& hypothesis_notes() const { return notes_; }

 private:
  int dim_;
  SymbolForm form_;
  EvalFn eval_;
  PolyFn poly_;
  std::vector<std::string> notes_;
};

cplx symbol_eval(const Symbol& sym, const Vec& x, const Vec& xi);

/// p(x, xi) = -i l(x)'xi + xi'Q(x)xi / 2 - int (e^{i y'xi} - 1 - i y'xi 1{|y|<1}) N(x, dy).
Symbol symbol_from_characteristics(DifferentialCharacteristics chars);

/// x-independent symbol of a Levy process.
Symbol symbol_levy(const LevyTriplet& triplet);

Symbol symbol_zero(int dim = 1);

/// dX = -a X dt + Phi(X-) dL:  p(x, xi) = psi_L(Phi(x)'xi) + i a x'xi.
Symbol symbol_ou_type(double a, MatrixField phi, const LevyTriplet& driver);

/// dX = b dZ + Phi(X-) dL:  p(x, xi) = psi_L(Phi(x)'xi) + psi_Z(b xi).
Symbol symbol_additive(double b, MatrixField phi, const LevyTriplet& driver_l, const LevyTriplet& driver_z);

/// dX = -a X dt + Phi(X) dW:  p(x, xi) = k |Phi(x)'xi|^2 + i a x'xi with k = 1/2
/// (canonical) or k = 1 (doubled).
Symbol symbol_diffusion(double a, MatrixField phi, Convention convention = Convention::Canonical);

/// dX = X- dU + dL in one dimension:  p(x, xi) = psi_U(x xi) + psi_L(xi).
Symbol symbol_gou(const LevyTriplet& driver_u, const LevyTriplet& driver_l);

/// dX = sqrt(2 a1) dW + beta(X) dt + a2 dZ with Z pure-jump, Levy measure
/// |y|^{-(d+alpha)} dy:  p(x, xi) = -i beta(x)'xi + a1 |xi|^2 - a2 c_alpha |xi|^alpha.
Symbol symbol_stable_noise(double a1, double a2, double alpha, std::function<Vec(const Vec&)> beta,
                           int dim = 1);

Symbol symbol_custom(int dim, Symbol::EvalFn eval, std::vector<std::string> notes = {});

}  // namespace symcrit

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "symcrit/symbol.hpp"
#include "symcrit/types.hpp"

namespace symcrit {

struct TransformValue {
  cplx value{};
  double error_estimate = 0.0;  // quadrature error or Monte Carlo standard error
};

struct TransformOptions {
  /// Use exact Gaussian reductions when g is declared polynomial.
  bool allow_closed_form = true;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Oscillation panels have width panel_scale * pi / (4 |xi|).
  double panel_scale = 1.0;
  int max_intervals = 20000;
  /// Gauss-Legendre points per axis and panel for box (d > 1) quadrature.
  int box_order = 12;
};

/// g: R^d -> C, optionally declared as a polynomial of degree <= 2 in x (d = 1).
struct WeightFunction {
  std::function<cplx(const Vec&)> eval;
  std::optional<XPolynomial> polynomial;

  static WeightFunction one();
  static WeightFunction from_polynomial(const XPolynomial& coeffs);
};

/// Candidate probability law.
class Measure {
 public:
  struct Density {
    std::function<double(const Vec&)> pdf;  // already normalized
    Vec lo, hi;                              // support box
    double raw_mass = 1.0;                   // integral of the user function before normalization
  };
  struct Gaussian {
    Vec mean, variance;  // diagonal covariance
  };
  struct Samples {
    std::vector<Vec> points;
  };
  struct Dirac {
    Vec at;
  };
  using Variant = std::variant<Density, Gaussian, Samples, Dirac>;

  enum class Normalization { Normalize, Check };

  /// Density on [lo, hi]. Normalize rescales by the quadrature mass; Check
  /// requires the mass to equal 1 within 1e-6.
  static Measure density(std::function<double(double)> rho, double lo, double hi,
                         Normalization norm = Normalization::Normalize);
  static Measure density_box(std::function<double(const Vec&)> rho, Vec lo, Vec hi,
                             Normalization norm = Normalization::Normalize);
  static Measure gaussian(double mean, double variance);
  static Measure gaussian(Vec mean, Vec variance);
  static Measure samples(const std::vector<double>& points);
  static Measure samples(std::vector<Vec> points);
  static Measure dirac(double at);
  static Measure dirac(Vec at);

  int dimension() const;
  const Variant& variant() const { return v_; }
  bool is_density() const { return std::holds_alternative<Density>(v_); }
  /// Density value (zero outside the support); requires is_density().
  double pdf(const Vec& x) const;
  double pdf(double x) const { return pdf(vec1(x)); }
  /// Support box used for quadrature (Gaussians: mean +- 8.5 standard deviations).
  std::pair<Vec, Vec> quadrature_box() const;

 private:
  explicit Measure(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Headerless CSV, one point per row, d comma-separated columns.
Measure load_samples_csv(const std::filesystem::path& path);

/// int e^{i x'xi} g(x) mu(dx) with an error estimate.
TransformValue weighted_transform(const Measure& mu, const WeightFunction& g, const Vec& xi,
                                  const TransformOptions& opts = {});
TransformValue weighted_transform(const Measure& mu, const WeightFunction& g, double xi,
                                  const TransformOptions& opts = {});

/// Characteristic function phi_mu(xi) = int e^{i x'xi} mu(dx).
TransformValue char_fn(const Measure& mu, const Vec& xi, const TransformOptions& opts = {});
TransformValue char_fn(const Measure& mu, double xi, const TransformOptions& opts = {});

}  // namespace symcrit

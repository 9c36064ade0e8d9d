#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace symcrit {

/// dX = b(X) dt + sigma(X) dW on the interval (lo, hi).
struct Diffusion1D {
  std::function<double(double)> drift;
  std::function<double(double)> volatility;
  double x0 = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// s(x) = exp(-int_{x0}^x 2 b / sigma^2 du). Exactly 1 at x0.
double scale_density(const Diffusion1D& diff, double x);
/// m(x) = 1 / (sigma(x)^2 s(x)).
double speed_density(const Diffusion1D& diff, double x);

/// pi = m / M, with log s tabulated once on Chebyshev panels (graded toward
/// finite boundaries).
class StationaryDensity {
 public:
  explicit StationaryDensity(const Diffusion1D& diff);

  /// Zero outside the truncated support.
  double operator()(double x) const;
  double speed(double x) const;

  double total_mass() const { return mass_; }
  double total_mass_error() const { return mass_error_; }
  /// Truncated support [lo, hi] used for M (m(edge) / m(x0) < 1e-12 on infinite sides).
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  /// Numeric indicator that int s dx diverges on the state space (not a proof).
  bool scale_integral_diverges() const { return scale_diverges_; }
  double scale_integral_estimate() const { return scale_integral_; }

 private:
  double log_speed(double x) const;  // I(x) - I(x0) - 2 log sigma(x)
  double integral(double x) const;   // I(x) = int_{lo}^x 2 b / sigma^2

  Diffusion1D diff_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> breaks_;  // panel edges, graded toward finite boundaries
  std::vector<double> values_;  // kNodes per panel
  // End panels at a finite boundary are evaluated directly from these anchors.
  bool direct_lo_ = false, direct_hi_ = false;
  double anchor_lo_ = 0.0, anchor_hi_ = 0.0;
  double i_x0_ = 0.0;
  double mass_ = 0.0, mass_error_ = 0.0;
  bool scale_diverges_ = false;
  double scale_integral_ = 0.0;
};

/// |1/2 (sigma^2 pi)'(x) - b(x) pi(x)| by central differences with h = 1e-5 (1 + |x|).
double fokker_planck_residual(const Diffusion1D& diff, const std::function<double(double)>& pi, double x);

}  // namespace symcrit

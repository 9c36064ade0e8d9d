#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "symcrit/levy.hpp"
#include "symcrit/measure.hpp"
#include "symcrit/symbol.hpp"

namespace symcrit {

/// dX = (-a X + beta(X)) dt + Phi(X-) dL + b dZ.
///
/// L is n-dimensional, Z (optional) is d-dimensional. Supported jump parts are
/// atoms (compound Poisson), annulus densities (compound Poisson plus Gaussian
/// small-jump correction) and one-dimensional symmetric stable laws.
struct SDESpec {
  int dim = 1;
  double mean_reversion = 0.0;
  MatrixField phi = MatrixField::constant(0.0);
  LevyTriplet driver = LevyTriplet::zero(1);
  double additive_b = 0.0;
  std::optional<LevyTriplet> additive_driver;
  std::function<Vec(const Vec&)> beta;

  /// dX = -lambda X dt + sigma dW.
  static SDESpec ornstein_uhlenbeck(double lambda, double sigma);
  /// dX = sqrt(2 a1) dW + beta(X) dt + a2 dZ, Z with Levy measure |y|^{-1-alpha} dy.
  static SDESpec stable_noise(double a1, double a2, double alpha, std::function<double(double)> beta);

  void validate() const;
  /// The probabilistic symbol this SDE is expected to have.
  Symbol symbol() const;
};

struct PathPoint {
  double t = 0.0;
  Vec x;
};

struct SymbolEstimate {
  cplx value{};
  double std_error = 0.0;
  double t_used = 0.0;
  std::int64_t n_paths = 0;
};

struct EmpiricalLawOptions {
  double burn_in = 10.0;
  std::int64_t n_samples = 10000;
  double sample_gap = 1.0;
  double dt = 0.01;
  std::uint64_t seed = 42;
  /// Independent chains, each keyed by (seed, chain index); samples are
  /// concatenated in chain order.
  int chains = 8;
};

/// Euler-Maruyama path on a uniform grid of step dt (the last step is shortened
/// to land on t_end). Deterministic given seed.
std::vector<PathPoint> simulate_path(const SDESpec& spec, const Vec& x0, double t_end, double dt,
                                     std::uint64_t seed);

/// Monte Carlo estimate of -(E^x e^{i(X_t - x)'xi} - 1) / t. dt defaults to t / 64.
SymbolEstimate estimate_symbol(const SDESpec& spec, const Vec& x, const Vec& xi, double t, std::int64_t n_paths,
                               std::uint64_t seed, std::optional<double> dt = std::nullopt);

/// Thinned post-burn-in states as a Samples measure.
Measure empirical_law(const SDESpec& spec, const Vec& x0, const EmpiricalLawOptions& opts);

/// Number of driver jump events along one simulated path of length t_end (for
/// checking the compound-Poisson clock).
std::int64_t count_jump_events(const SDESpec& spec, double t_end, double dt, std::uint64_t seed,
                               std::uint64_t stream);

/// Symmetric alpha-stable variate with E e^{iuS} = exp(-|u|^alpha)
/// (Chambers-Mallows-Stuck).
double sample_symmetric_stable(double alpha, double uniform_angle, double exponential);

}  // namespace symcrit

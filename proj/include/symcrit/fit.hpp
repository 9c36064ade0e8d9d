#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symcrit/criterion.hpp"
#include "symcrit/measure.hpp"
#include "symcrit/symbol.hpp"

namespace symcrit {

/// Parametric measure family on a parameter box. Parameters with lo == hi are
/// held fixed; the rest are searched.
class MeasureFamily {
 public:
  using Builder = std::function<Measure(const Vec&)>;

  /// One-dimensional Gaussian(mean, variance), parameters (mean, variance).
  static MeasureFamily gaussian(double mean_lo, double mean_hi, double var_lo, double var_hi);
  static MeasureFamily custom(std::vector<std::string> names, Vec lo, Vec hi, Builder build);

  Measure build(const Vec& params) const { return build_(params); }
  const std::vector<std::string>& names() const { return names_; }
  const Vec& lower() const { return lo_; }
  const Vec& upper() const { return hi_; }
  int size() const { return static_cast<int>(lo_.size()); }

 private:
  MeasureFamily(std::vector<std::string> names, Vec lo, Vec hi, Builder build);

  std::vector<std::string> names_;
  Vec lo_, hi_;
  Builder build_;
};

enum class Objective { SupAbs, L2 };

const char* to_string(Objective o);

struct FitProblem {
  Symbol symbol;
  MeasureFamily family;
  std::vector<double> grid = default_grid();
  Objective objective = Objective::SupAbs;
  /// Per-point weights; empty means all ones.
  std::vector<double> weights;
  TransformOptions transform;
};

struct FitOptions {
  int max_iter = 500;
  double tol = 1e-10;
  int restarts = 5;
  std::uint64_t seed = 42;
};

struct FitResult {
  Vec params;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Weighted SupAbs or L2 norm of |S(xi)| over the grid. +inf when a grid point
/// cannot be evaluated.
double fit_objective(const FitProblem& problem, const Vec& params);

/// Box-clamped Nelder-Mead. The first start is the best node of a coarse lattice
/// over the box, further restarts are uniform in the box (keyed by seed).
/// converged = objective <= tol; a stagnating search is a result, not an error.
FitResult fit_invariant(const FitProblem& problem, const FitOptions& opts = {});

/// Variance of the Gaussian solving the OU criterion ODE: sigma^2 / (2 lambda)
/// in the canonical convention, sigma^2 / lambda in the doubled convention.
double ou_variance_ode_solve(double lambda, double sigma, Convention convention);

}  // namespace symcrit

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symcrit/levy.hpp"
#include "symcrit/measure.hpp"
#include "symcrit/symbol.hpp"

namespace symcrit {

enum class Verdict { ConsistentWithInvariance, Violated, Inconclusive };

const char* to_string(Verdict v);
/// Fixed report wording for a verdict.
std::string verdict_statement(Verdict v);

struct ResidualPoint {
  Vec xi;
  TransformValue residual;
  bool failed = false;
  std::string failure;  // diagnostic when failed
};

/// Residuals S(xi) = int e^{i x'xi} p(x, xi) mu(dx) over a grid, with summary norms.
struct CriterionReport {
  std::vector<ResidualPoint> points;
  double max_abs = 0.0;
  double l2_norm = 0.0;  // sqrt of the trapezoid-weighted sum of |S|^2 (d = 1), or mean |S|^2 otherwise
  Verdict verdict = Verdict::Inconclusive;
  double tolerance_used = 0.0;
  std::vector<std::string> hypothesis_notes;
};

struct CriterionOptions {
  double tolerance = 1e-6;
  TransformOptions transform;
};

/// 101 equally spaced points on [-5, 5].
std::vector<double> default_grid();
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// S(xi) for a single frequency.
TransformValue residual(const Symbol& sym, const Measure& mu, const Vec& xi, const TransformOptions& opts = {});
TransformValue residual(const Symbol& sym, const Measure& mu, double xi, const TransformOptions& opts = {});

/// Evaluates S over the grid (in parallel; assembly in grid order). A point whose
/// evaluation throws is recorded as failed and the report is still produced.
CriterionReport residual_profile(const Symbol& sym, const Measure& mu, const std::vector<Vec>& grid,
                                 const CriterionOptions& opts = {});
CriterionReport residual_profile(const Symbol& sym, const Measure& mu, const std::vector<double>& grid,
                                 const CriterionOptions& opts = {});

/// Violated iff some |S| > tol + 3 err; otherwise Inconclusive if any grid point
/// failed to evaluate; otherwise ConsistentWithInvariance.
Verdict classify(const std::vector<ResidualPoint>& points, double tolerance);

Verdict check_invariance(const Symbol& sym, const Measure& mu, const std::vector<double>& grid, double tol,
                         const TransformOptions& opts = {});

/// int e^{i x xi} psi_U(x xi) mu(dx) + psi_L(xi) phi_mu(xi); zero iff the
/// generalized Ornstein-Uhlenbeck relation holds at xi.
TransformValue gou_relation_residual(const LevyTriplet& driver_u, const LevyTriplet& driver_l, const Measure& mu,
                                     double xi, const TransformOptions& opts = {});

/// (a1 |xi|^2 - a2 c_alpha |xi|^alpha) rho^(xi) + i xi'(beta rho)^(xi), where
/// f^(xi) = int e^{-i x'xi} f(x) dx. Requires a density measure.
TransformValue albeverio_residual(double a1, double a2, double alpha, const std::function<Vec(const Vec&)>& beta,
                                  const Measure& rho, const Vec& xi, const TransformOptions& opts = {});
TransformValue albeverio_residual(double a1, double a2, double alpha, const std::function<double(double)>& beta,
                                  const Measure& rho, double xi, const TransformOptions& opts = {});

enum class FactorizingVerdict { Compatible, Incompatible };

struct FactorizingResult {
  double max_product = 0.0;  // max over grid of |Phi(x)| rho(x)
  double argmax = 0.0;
  FactorizingVerdict verdict = FactorizingVerdict::Compatible;
};

/// For dX = Phi(X-) dL with symmetric alpha-stable L, alpha in (0, 1), an
/// absolutely continuous invariant density must satisfy Phi rho = 0 a.e.
FactorizingResult factorizing_check(const std::function<double(double)>& phi, const Measure& rho,
                                    const std::vector<double>& grid_x, double tol = 1e-10);

}  // namespace symcrit

#include "symcrit/criterion.hpp"

#include <cmath>

#include "symcrit/errors.hpp"
#include "symcrit/parallel.hpp"

namespace symcrit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConsistentWithInvariance: return "ConsistentWithInvariance";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

std::string verdict_statement(Verdict v) {
  switch (v) {
    case Verdict::ConsistentWithInvariance:
      return "criterion satisfied on the grid: the measure is infinitesimally invariant (criterion "
             "satisfied); this is a necessary condition and does not prove full invariance.";
    case Verdict::Violated:
      return "criterion violated: the measure is not invariant for this process (rejection up to numerical "
             "error).";
    case Verdict::Inconclusive:
      return "inconclusive: some grid points could not be evaluated.";
  }
  return {};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> default_grid() { return linspace(-5.0, 5.0, 101); }

TransformValue residual(const Symbol& sym, const Measure& mu, const Vec& xi, const TransformOptions& opts) {
  if (sym.dimension() != mu.dimension() || xi.size() != sym.dimension()) {
    throw InputError("residual: dimension mismatch between symbol, measure and xi");
  }
  WeightFunction g;
  g.eval = [&sym, &xi](const Vec& x) { return sym(x, xi); };
  if (sym.has_x_polynomial()) g.polynomial = sym.x_polynomial(xi(0));
  return weighted_transform(mu, g, xi, opts);
}

TransformValue residual(const Symbol& sym, const Measure& mu, double xi, const TransformOptions& opts) {
  return residual(sym, mu, vec1(xi), opts);
}

Verdict classify(const std::vector<ResidualPoint>& points, double tolerance) {
  bool any_failed = false;
  for (const auto& p : points) {
    if (p.failed) {
      any_failed = true;
      continue;
    }
    if (std::abs(p.residual.value) > tolerance + 3.0 * p.residual.error_estimate) return Verdict::Violated;
  }
  return any_failed ? Verdict::Inconclusive : Verdict::ConsistentWithInvariance;
}

CriterionReport residual_profile(const Symbol& sym, const Measure& mu, const std::vector<Vec>& grid,
                                 const CriterionOptions& opts) {
  if (grid.empty()) throw InputError("residual_profile: grid must be nonempty");
  if (!(opts.tolerance > 0.0)) throw InputError("residual_profile: tolerance must be positive");
  CriterionReport report;
  report.points.resize(grid.size());
  parallel::for_each_index(grid.size(), [&](std::size_t i) {
    auto& pt = report.points[i];
    pt.xi = grid[i];
    try {
      pt.residual = residual(sym, mu, grid[i], opts.transform);
      if (!std::isfinite(std::abs(pt.residual.value))) {
        pt.failed = true;
        pt.failure = "non-finite residual";
      }
    } catch (const Error& e) {
      pt.failed = true;
      pt.failure = e.what();
    }
  });

  double sum_sq = 0.0;
  const bool one_d = sym.dimension() == 1 && grid.size() > 1;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    if (p.failed) continue;
    const double a = std::abs(p.residual.value);
    report.max_abs = std::max(report.max_abs, a);
    double w = 1.0 / static_cast<double>(grid.size());
    if (one_d) {
      const double left = i > 0 ? grid[i](0) - grid[i - 1](0) : 0.0;
      const double right = i + 1 < grid.size() ? grid[i + 1](0) - grid[i](0) : 0.0;
      w = 0.5 * (std::abs(left) + std::abs(right));
    }
    sum_sq += w * a * a;
  }
  report.l2_norm = std::sqrt(sum_sq);
  report.tolerance_used = opts.tolerance;
  report.verdict = classify(report.points, opts.tolerance);

  report.hypothesis_notes = sym.hypothesis_notes();
  report.hypothesis_notes.emplace_back(
      "the criterion is tested on a finite xi grid: equality for almost all xi cannot be distinguished from "
      "equality everywhere.");
  report.hypothesis_notes.emplace_back(
      "integrability of |p(x, xi)| with respect to mu (moment conditions) is assumed, and only checked on the "
      "truncated support of the measure.");
  report.hypothesis_notes.emplace_back(verdict_statement(report.verdict));
  return report;
}

CriterionReport residual_profile(const Symbol& sym, const Measure& mu, const std::vector<double>& grid,
                                 const CriterionOptions& opts) {
  std::vector<Vec> g;
  g.reserve(grid.size());
  for (double x : grid) g.push_back(vec1(x));
  return residual_profile(sym, mu, g, opts);
}

Verdict check_invariance(const Symbol& sym, const Measure& mu, const std::vector<double>& grid, double tol,
                         const TransformOptions& opts) {
  if (!(tol > 0.0)) throw InputError("check_invariance: tolerance must be positive");
  CriterionOptions co;
  co.tolerance = tol;
  co.transform = opts;
  return residual_profile(sym, mu, grid, co).verdict;
}

TransformValue gou_relation_residual(const LevyTriplet& driver_u, const LevyTriplet& driver_l, const Measure& mu,
                                     double xi, const TransformOptions& opts) {
  if (driver_u.dimension() != 1 || driver_l.dimension() != 1 || mu.dimension() != 1) {
    throw InputError("gou_relation_residual: one-dimensional inputs required");
  }
  WeightFunction g;
  g.eval = [&driver_u, xi](const Vec& x) { return levy_exponent(driver_u, x(0) * xi); };
  if (!has_jumps(driver_u.jumps())) {
    const double l = driver_u.drift()(0), q = driver_u.gaussian()(0, 0);
    g.polynomial = XPolynomial{0.0, cplx(0.0, -l * xi), cplx(0.5 * q * xi * xi, 0.0)};
  }
  const auto lhs = weighted_transform(mu, g, xi, opts);
  const auto phi = char_fn(mu, xi, opts);
  const cplx psi_l = levy_exponent(driver_l, xi);
  return {lhs.value + psi_l * phi.value, lhs.error_estimate + std::abs(psi_l) * phi.error_estimate};
}

TransformValue albeverio_residual(double a1, double a2, double alpha, const std::function<Vec(const Vec&)>& beta,
                                  const Measure& rho, const Vec& xi, const TransformOptions& opts) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(a1 + a2 > 0.0)) {
    throw InputError("albeverio_residual: need a1, a2 >= 0 and a1 + a2 > 0");
  }
  if (!rho.is_density()) throw InputError("albeverio_residual: rho must be a density measure");
  if (!beta) throw InputError("albeverio_residual: beta is empty");
  const int d = rho.dimension();
  if (xi.size() != d) throw InputError("albeverio_residual: dimension mismatch");
  const double c_alpha = stable_constant(alpha, d);
  const double r = xi.norm();
  const double factor = a1 * r * r - a2 * c_alpha * std::pow(r, alpha);
  const Vec minus_xi = -xi;
  const auto rho_hat = char_fn(rho, minus_xi, opts);
  cplx value = factor * rho_hat.value;
  double err = std::abs(factor) * rho_hat.error_estimate;
  for (int j = 0; j < d; ++j) {
    if (xi(j) == 0.0) continue;
    WeightFunction g;
    g.eval = [&beta, j, d](const Vec& x) {
      const Vec b = beta(x);
      if (b.size() != d) throw InputError("albeverio_residual: beta has wrong dimension");
      return cplx(b(j), 0.0);
    };
    const auto br = weighted_transform(rho, g, minus_xi, opts);
    value += cplx(0.0, xi(j)) * br.value;
    err += std::abs(xi(j)) * br.error_estimate;
  }
  return {value, err};
}

TransformValue albeverio_residual(double a1, double a2, double alpha, const std::function<double(double)>& beta,
                                  const Measure& rho, double xi, const TransformOptions& opts) {
  auto beta_vec = [&beta](const Vec& x) { return vec1(beta(x(0))); };
  return albeverio_residual(a1, a2, alpha, beta_vec, rho, vec1(xi), opts);
}

FactorizingResult factorizing_check(const std::function<double(double)>& phi, const Measure& rho,
                                    const std::vector<double>& grid_x, double tol) {
  if (grid_x.empty()) throw InputError("factorizing_check: grid must be nonempty");
  if (!rho.is_density() || rho.dimension() != 1) {
    throw InputError("factorizing_check: rho must be a one-dimensional density");
  }
  if (!phi) throw InputError("factorizing_check: Phi is empty");
  FactorizingResult out;
  out.argmax = grid_x.front();
  for (double x : grid_x) {
    const double v = std::abs(phi(x)) * rho.pdf(x);
    if (v > out.max_product) {
      out.max_product = v;
      out.argmax = x;
    }
  }
  out.verdict = out.max_product <= tol ? FactorizingVerdict::Compatible : FactorizingVerdict::Incompatible;
  return out;
}

}  // namespace symcrit

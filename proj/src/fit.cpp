#include "symcrit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "symcrit/errors.hpp"
#include "symcrit/parallel.hpp"
#include "symcrit/rng.hpp"

namespace symcrit {

MeasureFamily::MeasureFamily(std::vector<std::string> names, Vec lo, Vec hi, Builder build)
    : names_(std::move(names)), lo_(std::move(lo)), hi_(std::move(hi)), build_(std::move(build)) {
  if (lo_.size() != hi_.size() || static_cast<std::size_t>(lo_.size()) != names_.size() || lo_.size() == 0) {
    throw InputError("measure family: names and bounds must have the same nonzero length");
  }
  if (!lo_.allFinite() || !hi_.allFinite() || (hi_.array() < lo_.array()).any()) {
    throw InputError("measure family: parameter box is empty or not finite");
  }
  if (!build_) throw InputError("measure family: builder is empty");
}

MeasureFamily MeasureFamily::gaussian(double mean_lo, double mean_hi, double var_lo, double var_hi) {
  if (!(var_lo > 0.0)) throw InputError("gaussian family: variance bounds must be positive");
  Vec lo(2), hi(2);
  lo << mean_lo, var_lo;
  hi << mean_hi, var_hi;
  return MeasureFamily({"mean", "variance"}, lo, hi, [](const Vec& p) { return Measure::gaussian(p(0), p(1)); });
}

MeasureFamily MeasureFamily::custom(std::vector<std::string> names, Vec lo, Vec hi, Builder build) {
  return MeasureFamily(std::move(names), std::move(lo), std::move(hi), std::move(build));
}

const char* to_string(Objective o) { return o == Objective::SupAbs ? "sup_abs" : "l2"; }

namespace {

void validate_problem(const FitProblem& p) {
  if (p.grid.empty()) throw InputError("fit: grid must be nonempty");
  if (!p.weights.empty() && p.weights.size() != p.grid.size()) {
    throw InputError("fit: weights must match the grid size");
  }
  for (double w : p.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("fit: weights must be finite and nonnegative");
  }
  if (p.symbol.dimension() != 1) throw InputError("fit: one-dimensional symbols only");
}

}  // namespace

double fit_objective(const FitProblem& problem, const Vec& params) {
  validate_problem(problem);
  std::vector<double> terms(problem.grid.size());
  std::optional<Measure> mu;
  try {
    mu = problem.family.build(params);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  parallel::for_each_index(problem.grid.size(), [&](std::size_t i) {
    const double w = problem.weights.empty() ? 1.0 : problem.weights[i];
    try {
      terms[i] = w * std::abs(residual(problem.symbol, *mu, problem.grid[i], problem.transform).value);
    } catch (const Error&) {
      terms[i] = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(terms[i])) terms[i] = std::numeric_limits<double>::infinity();
  });
  if (problem.objective == Objective::SupAbs) return *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t * t;
  return std::sqrt(sum);
}

namespace {

struct Search {
  const FitProblem& problem;
  std::vector<int> free;  // indices of searched parameters
  Vec base;               // full parameter vector with fixed entries

  Vec expand(const Vec& y) const {
    Vec p = base;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const int j = free[k];
      p(j) = std::clamp(y(static_cast<Eigen::Index>(k)), problem.family.lower()(j), problem.family.upper()(j));
    }
    return p;
  }
  Vec clamp(const Vec& y) const {
    Vec c = y;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const int j = free[k];
      c(static_cast<Eigen::Index>(k)) = std::clamp(c(static_cast<Eigen::Index>(k)), problem.family.lower()(j),
                                                   problem.family.upper()(j));
    }
    return c;
  }
  double operator()(const Vec& y) const { return fit_objective(problem, expand(y)); }
};

struct RunResult {
  Vec y;
  double f;
  int iterations;
};

RunResult nelder_mead(const Search& search, const Vec& start, const Vec& width, const FitOptions& opts) {
  const auto n = start.size();
  std::vector<Vec> simplex(n + 1, start);
  std::vector<double> f(n + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec v = start;
    const double step = 0.1 * width(k);
    const double hi_room = width(k) == 0.0 ? 0.0 : 1.0;
    v(k) += step * hi_room;
    v = search.clamp(v);
    if (v(k) == start(k)) v(k) -= step;
    simplex[k + 1] = search.clamp(v);
  }
  for (Eigen::Index k = 0; k <= n; ++k) f[k] = search(simplex[k]);

  std::vector<Eigen::Index> order(n + 1);
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    const auto best = order.front(), worst = order.back(), second = order[n - 1];
    if (f[best] == 0.0) break;
    double diameter = 0.0;
    for (Eigen::Index k = 0; k <= n; ++k) {
      diameter = std::max(diameter, ((simplex[k] - simplex[best]).cwiseAbs().array() /
                                     (width.array() + 1e-300)).maxCoeff());
    }
    if (diameter < 1e-13) break;

    Vec centroid = Vec::Zero(n);
    for (Eigen::Index k = 0; k <= n; ++k) {
      if (k != worst) centroid += simplex[k];
    }
    centroid /= static_cast<double>(n);
    const Vec reflected = search.clamp(centroid + (centroid - simplex[worst]));
    const double fr = search(reflected);
    if (fr < f[best]) {
      const Vec expanded = search.clamp(centroid + 2.0 * (centroid - simplex[worst]));
      const double fe = search(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        f[worst] = fe;
      } else {
        simplex[worst] = reflected;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = reflected;
      f[worst] = fr;
      continue;
    }
    const bool outside = fr < f[worst];
    const Vec contracted = outside ? Vec(centroid + 0.5 * (reflected - centroid))
                                   : Vec(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = search(contracted);
    if (fc < (outside ? fr : f[worst])) {
      simplex[worst] = contracted;
      f[worst] = fc;
      continue;
    }
    for (Eigen::Index k = 0; k <= n; ++k) {
      if (k == best) continue;
      simplex[k] = simplex[best] + 0.5 * (simplex[k] - simplex[best]);
      f[k] = search(simplex[k]);
    }
  }
  const auto best = std::min_element(f.begin(), f.end()) - f.begin();
  return {simplex[best], f[best], it};
}

}  // namespace

FitResult fit_invariant(const FitProblem& problem, const FitOptions& opts) {
  validate_problem(problem);
  if (opts.max_iter < 1 || opts.restarts < 0 || !(opts.tol >= 0.0)) throw InputError("fit: invalid options");
  const auto& fam = problem.family;
  Search search{problem, {}, 0.5 * (fam.lower() + fam.upper())};
  for (int j = 0; j < fam.size(); ++j) {
    if (fam.lower()(j) < fam.upper()(j)) search.free.push_back(j);
  }

  FitResult result;
  if (search.free.empty()) {
    result.params = search.base;
    result.objective_value = fit_objective(problem, search.base);
    result.converged = result.objective_value <= opts.tol;
    return result;
  }

  const auto n = static_cast<Eigen::Index>(search.free.size());
  Vec lo(n), width(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    lo(k) = fam.lower()(search.free[k]);
    width(k) = fam.upper()(search.free[k]) - lo(k);
  }
  // Every corner of the box must be evaluable.
  if (n <= 10) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Vec corner = lo;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (mask & (1u << k)) corner(k) += width(k);
      }
      if (!std::isfinite(search(corner))) throw InputError("fit: objective is not evaluable at a box corner");
    }
  }

  // The first start is the best node of a coarse lattice over the box (the
  // center when there are more than three free parameters).
  Vec first = lo + 0.5 * width;
  if (n <= 3) {
    const int per_axis = n <= 2 ? 17 : 7;
    double f_first = search(first);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      Vec node(n);
      for (Eigen::Index k = 0; k < n; ++k) node(k) = lo(k) + width(k) * idx[k] / (per_axis - 1);
      const double f = search(node);
      if (f < f_first) {
        f_first = f;
        first = node;
      }
      Eigen::Index k = 0;
      while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
      if (k == n) break;
    }
  }

  RunResult best{first, std::numeric_limits<double>::infinity(), 0};
  for (int r = 0; r <= opts.restarts; ++r) {
    Vec start = first;
    if (r > 0) {
      CounterRng rng(opts.seed, static_cast<std::uint64_t>(r));
      for (Eigen::Index k = 0; k < n; ++k) start(k) = lo(k) + rng.uniform() * width(k);
    }
    const auto run = nelder_mead(search, start, width, opts);
    result.iterations += run.iterations;
    if (run.f < best.f) best = run;
    if (best.f <= opts.tol) break;
  }
  result.params = search.expand(best.y);
  result.objective_value = best.f;
  result.converged = best.f <= opts.tol;
  return result;
}

double ou_variance_ode_solve(double lambda, double sigma, Convention convention) {
  if (!(lambda > 0.0) || !(sigma > 0.0) || !std::isfinite(lambda) || !std::isfinite(sigma)) {
    throw InputError("ou_variance_ode_solve: lambda and sigma must be positive");
  }
  const double v = sigma * sigma / lambda;
  return convention == Convention::Canonical ? 0.5 * v : v;
}

}  // namespace symcrit

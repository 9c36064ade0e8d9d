#include "symcrit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symcrit/errors.hpp"
#include "symcrit/parallel.hpp"
#include "symcrit/quadrature.hpp"
#include "symcrit/rng.hpp"

namespace symcrit {

double sample_symmetric_stable(double alpha, double uniform_angle, double exponential) {
  const double v = std::numbers::pi * (uniform_angle - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = exponential;
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

SDESpec SDESpec::ornstein_uhlenbeck(double lambda, double sigma) {
  SDESpec s;
  s.mean_reversion = lambda;
  s.phi = MatrixField::constant(sigma);
  s.driver = LevyTriplet::brownian(1.0);
  return s;
}

SDESpec SDESpec::stable_noise(double a1, double a2, double alpha, std::function<double(double)> beta) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(a1 + a2 > 0.0)) throw InputError("stable_noise: need a1, a2 >= 0, a1 + a2 > 0");
  SDESpec s;
  s.phi = MatrixField::constant(std::sqrt(2.0 * a1));
  s.driver = LevyTriplet::brownian(1.0);
  s.additive_b = 1.0;
  // a2 scales the Levy measure |y|^{-1-alpha} dy, so the exponent is -a2 c_alpha |xi|^alpha.
  s.additive_driver = LevyTriplet::stable(alpha, -a2 * stable_constant(alpha, 1), 1);
  if (beta) s.beta = [beta](const Vec& x) { return vec1(beta(x(0))); };
  return s;
}

namespace {

void check_driver_supported(const LevyTriplet& t, const char* which) {
  if (const auto* s = std::get_if<StableJumps>(&t.jumps()); s && s->dimension() != 1) {
    throw InputError(std::string(which) + ": stable drivers are simulated in one dimension only");
  }
}

}  // namespace

void SDESpec::validate() const {
  if (dim < 1) throw InputError("SDE dimension must be positive");
  if (!std::isfinite(mean_reversion) || !std::isfinite(additive_b)) throw InputError("SDE coefficients must be finite");
  if (phi.rows() != dim) throw InputError("Phi must have d rows");
  if (phi.cols() != driver.dimension()) throw InputError("Phi columns must match the driver dimension");
  check_driver_supported(driver, "driver L");
  if (additive_driver) {
    if (additive_driver->dimension() != dim) throw InputError("additive driver Z must be d-dimensional");
    check_driver_supported(*additive_driver, "driver Z");
  }
}

Symbol SDESpec::symbol() const {
  validate();
  if (!beta && !additive_driver) return symbol_ou_type(mean_reversion, phi, driver);
  if (!beta && mean_reversion == 0.0) return symbol_additive(additive_b, phi, driver, *additive_driver);
  auto self = *this;
  auto eval = [self](const Vec& x, const Vec& xi) -> cplx {
    const Vec u = self.phi(x).transpose() * xi;
    cplx p = levy_exponent(self.driver, u) + cplx(0.0, self.mean_reversion * x.dot(xi));
    if (self.additive_driver) p += levy_exponent(*self.additive_driver, Vec(self.additive_b * xi));
    if (self.beta) p += cplx(0.0, -self.beta(x).dot(xi));
    return p;
  };
  return symbol_custom(dim, std::move(eval));
}

namespace {

/// Precomputed sampling data for one Levy driver.
struct DriverPlan {
  int dim = 1;
  Vec drift;       // l minus the compensator of finite-activity small jumps
  Mat gauss_root;  // A with A A' = effective Gaussian covariance
  bool gaussian = false;
  double rate = 0.0;  // finite jump activity
  const AtomicJumps* atoms = nullptr;
  std::vector<double> atom_cdf;
  std::vector<double> annulus_y, annulus_cdf;  // tabulated inverse CDF
  double stable_alpha = 0.0;
  double stable_scale = 0.0;

  explicit DriverPlan(const LevyTriplet& t) : dim(t.dimension()), drift(t.drift()) {
    const Mat q = t.effective_gaussian();
    if (q.cwiseAbs().maxCoeff() > 0.0) {
      gaussian = true;
      if (dim == 1) {
        gauss_root = Mat::Constant(1, 1, std::sqrt(std::max(0.0, q(0, 0))));
      } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()));
        gauss_root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
      }
    }
    if (const auto* a = std::get_if<AtomicJumps>(&t.jumps())) {
      atoms = a;
      rate = a->total_mass();
      drift -= a->compensator();
      double c = 0.0;
      for (const auto& atom : a->atoms()) atom_cdf.push_back(c += atom.mass / rate);
      atom_cdf.back() = 1.0;
    } else if (const auto* an = std::get_if<AnnulusJumps>(&t.jumps())) {
      tabulate_annulus(*an);
    } else if (const auto* s = std::get_if<StableJumps>(&t.jumps())) {
      stable_alpha = s->alpha();
      stable_scale = s->scale();
    }
  }

  void tabulate_annulus(const AnnulusJumps& an) {
    constexpr int kPoints = 4096;
    auto add_branch = [&](double a, double b) {
      for (int i = 0; i <= kPoints; ++i) {
        const double y = a + (b - a) * i / kPoints;
        const double n = std::max(0.0, an.density(y));
        if (!std::isfinite(n)) throw InputError("annulus jump density is not finite");
        if (i > 0 || annulus_y.empty()) {
          const double prev_y = annulus_y.empty() ? y : annulus_y.back();
          const double prev_c = annulus_cdf.empty() ? 0.0 : annulus_cdf.back();
          const double prev_n = annulus_y.empty() ? n : std::max(0.0, an.density(prev_y));
          annulus_y.push_back(y);
          annulus_cdf.push_back(prev_c + (i == 0 ? 0.0 : 0.5 * (n + prev_n) * (y - prev_y)));
        } else {
          // Jump across the gap (-inner, inner): no mass added.
          annulus_y.push_back(y);
          annulus_cdf.push_back(annulus_cdf.back());
        }
      }
    };
    add_branch(-an.outer(), -an.inner());
    add_branch(an.inner(), an.outer());
    rate = annulus_cdf.back();
    if (rate > 0.0) {
      for (auto& c : annulus_cdf) c /= rate;
    }
    quad::Tolerance tol;
    tol.rel = 1e-10;
    tol.abs = 1e-14;
    auto first_moment = [&](double y) { return y * an.density(y); };
    if (an.inner() < 1.0) {
      const double hi = std::min(1.0, an.outer());
      const double comp = quad::integrate_or_throw<double>(first_moment, an.inner(), hi, tol, "annulus compensator").value +
                          quad::integrate_or_throw<double>(first_moment, -hi, -an.inner(), tol, "annulus compensator").value;
      drift(0) -= comp;
    }
  }

  Vec sample_jump(CounterRng& rng) const {
    const double u = rng.uniform();
    if (atoms) {
      const auto it = std::upper_bound(atom_cdf.begin(), atom_cdf.end(), u);
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - atom_cdf.begin()), atom_cdf.size() - 1);
      return atoms->atoms()[idx].location;
    }
    const auto it = std::upper_bound(annulus_cdf.begin(), annulus_cdf.end(), u);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - annulus_cdf.begin()), 1, annulus_cdf.size() - 1);
    const std::size_t lo = hi - 1;
    const double span = annulus_cdf[hi] - annulus_cdf[lo];
    const double frac = span > 0.0 ? (u - annulus_cdf[lo]) / span : 0.5;
    return vec1(annulus_y[lo] + frac * (annulus_y[hi] - annulus_y[lo]));
  }

  double stable_increment(double s, CounterRng& rng) const {
    const double v = rng.uniform_open();
    const double w = rng.exponential();
    return std::pow(stable_scale * s, 1.0 / stable_alpha) * sample_symmetric_stable(stable_alpha, v, w);
  }

  /// Continuous-in-time part of the increment over a segment of length s.
  Vec increment(double s, CounterRng& rng) const {
    Vec inc = drift * s;
    if (gaussian) {
      Vec z(dim);
      for (int j = 0; j < dim; ++j) z(j) = rng.normal();
      inc += std::sqrt(s) * (gauss_root * z);
    }
    if (stable_scale > 0.0) inc(0) += stable_increment(s, rng);
    return inc;
  }

  double increment_scalar(double s, CounterRng& rng) const {
    double inc = drift(0) * s;
    if (gaussian) inc += std::sqrt(s) * gauss_root(0, 0) * rng.normal();
    if (stable_scale > 0.0) inc += stable_increment(s, rng);
    return inc;
  }
};

class Stepper {
 public:
  explicit Stepper(const SDESpec& spec) : spec_(spec), l_(spec.driver) {
    spec_.validate();
    if (spec.additive_driver) z_.emplace(*spec.additive_driver);
    scalar_ = spec.dim == 1 && spec.phi.cols() == 1;
  }

  /// Advances x over [0, h], placing compound-Poisson events at exact exponential times.
  void advance(Vec& x, double h, CounterRng& rng) {
    events_.clear();
    collect_events(l_, 0, h, rng);
    if (z_) collect_events(*z_, 1, h, rng);
    if (events_.size() > 1) std::sort(events_.begin(), events_.end());
    double t = 0.0;
    for (const auto& [tau, source] : events_) {
      if (tau > t) continuous(x, tau - t, rng);
      jump(x, source, rng);
      t = tau;
    }
    if (h > t) continuous(x, h - t, rng);
  }

  std::int64_t events_from_l() const { return events_l_; }

 private:
  void collect_events(const DriverPlan& plan, int source, double h, CounterRng& rng) {
    if (!(plan.rate > 0.0)) return;
    double tau = rng.exponential() / plan.rate;
    while (tau < h) {
      events_.emplace_back(tau, source);
      if (source == 0) ++events_l_;
      tau += rng.exponential() / plan.rate;
    }
  }

  void continuous(Vec& x, double s, CounterRng& rng) {
    if (scalar_) {
      const double x0 = x(0);
      double drift = -spec_.mean_reversion * x0;
      if (spec_.beta) drift += spec_.beta(x)(0);
      double next = x0 + drift * s + spec_.phi.scalar_at(x0) * l_.increment_scalar(s, rng);
      if (z_) next += spec_.additive_b * z_->increment_scalar(s, rng);
      x(0) = next;
      return;
    }
    Vec drift = -spec_.mean_reversion * x;
    if (spec_.beta) drift += spec_.beta(x);
    Vec next = x + drift * s + spec_.phi(x) * l_.increment(s, rng);
    if (z_) next += spec_.additive_b * z_->increment(s, rng);
    x = std::move(next);
  }

  void jump(Vec& x, int source, CounterRng& rng) {
    if (source == 0) {
      const Vec y = l_.sample_jump(rng);
      if (scalar_) x(0) += spec_.phi.scalar_at(x(0)) * y(0);
      else x += spec_.phi(x) * y;
    } else {
      x += spec_.additive_b * z_->sample_jump(rng);
    }
  }

  SDESpec spec_;
  DriverPlan l_;
  std::optional<DriverPlan> z_;
  bool scalar_ = false;
  std::vector<std::pair<double, int>> events_;
  std::int64_t events_l_ = 0;
};

void check_state(const Vec& x, std::size_t step) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e150) {
    throw SimulationError("state overflowed or became non-finite", step);
  }
}

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

// Pairwise summation over a contiguous range.
cplx pairwise_sum(const cplx* v, std::size_t n) {
  if (n <= 16) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

std::vector<PathPoint> simulate_path(const SDESpec& spec, const Vec& x0, double t_end, double dt,
                                     std::uint64_t seed) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("simulate_path: dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw InputError("simulate_path: need t_end >= dt");
  if (x0.size() != spec.dim || !x0.allFinite()) throw InputError("simulate_path: bad initial state");
  Stepper stepper(spec);
  CounterRng rng(seed, 0);
  const std::size_t n = step_count(t_end, dt);
  std::vector<PathPoint> path;
  path.reserve(n + 1);
  path.push_back({0.0, x0});
  Vec x = x0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t_prev = path.back().t;
    const double t_next = k == n ? t_end : static_cast<double>(k) * dt;
    stepper.advance(x, t_next - t_prev, rng);
    check_state(x, k);
    path.push_back({t_next, x});
  }
  return path;
}

SymbolEstimate estimate_symbol(const SDESpec& spec, const Vec& x, const Vec& xi, double t, std::int64_t n_paths,
                               std::uint64_t seed, std::optional<double> dt) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("estimate_symbol: t must be positive");
  if (n_paths < 100) throw InputError("estimate_symbol: need at least 100 paths");
  if (x.size() != spec.dim || xi.size() != spec.dim) throw InputError("estimate_symbol: dimension mismatch");
  if (!x.allFinite() || !xi.allFinite()) throw InputError("estimate_symbol: inputs must be finite");
  const double h = dt.value_or(t / 64.0);
  if (!(h > 0.0)) throw InputError("estimate_symbol: dt must be positive");
  spec.validate();
  const std::size_t steps = step_count(t, h);
  const auto n = static_cast<std::size_t>(n_paths);
  std::vector<cplx> values(n);
  // Paths run in blocks so each block builds its stepper (and jump tables) once.
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel::for_each_index(blocks, [&](std::size_t blk) {
    Stepper stepper(spec);
    const std::size_t end = std::min(n, (blk + 1) * kBlock);
    for (std::size_t i = blk * kBlock; i < end; ++i) {
      CounterRng rng(seed, i);
      Vec state = x;
      double elapsed = 0.0;
      for (std::size_t k = 1; k <= steps; ++k) {
        const double next = k == steps ? t : static_cast<double>(k) * h;
        stepper.advance(state, next - elapsed, rng);
        elapsed = next;
        check_state(state, k);
      }
      values[i] = std::exp(cplx(0.0, (state - x).dot(xi)));
    }
  });
  const cplx mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::norm(values[i] - mean);
  const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
  SymbolEstimate est;
  est.value = -(mean - 1.0) / t;
  est.std_error = std::sqrt(var / static_cast<double>(n)) / t;
  est.t_used = t;
  est.n_paths = n_paths;
  return est;
}

Measure empirical_law(const SDESpec& spec, const Vec& x0, const EmpiricalLawOptions& opts) {
  if (!(opts.burn_in > 0.0) || !(opts.sample_gap > 0.0)) {
    throw InputError("empirical_law: burn_in and sample_gap must be positive");
  }
  if (!(opts.dt > 0.0)) throw InputError("empirical_law: dt must be positive");
  if (opts.n_samples < 1) throw InputError("empirical_law: need at least one sample");
  if (opts.chains < 1) throw InputError("empirical_law: need at least one chain");
  if (x0.size() != spec.dim || !x0.allFinite()) throw InputError("empirical_law: bad initial state");
  spec.validate();
  const auto chains = static_cast<std::size_t>(std::min<std::int64_t>(opts.chains, opts.n_samples));
  const auto total = static_cast<std::size_t>(opts.n_samples);
  std::vector<std::size_t> offset(chains + 1, 0);
  for (std::size_t c = 0; c < chains; ++c) {
    offset[c + 1] = offset[c] + total / chains + (c < total % chains ? 1 : 0);
  }
  std::vector<Vec> samples(total);
  const std::size_t burn_steps = step_count(opts.burn_in, opts.dt);
  const std::size_t gap_steps = step_count(opts.sample_gap, opts.dt);
  const double burn_h = opts.burn_in / static_cast<double>(burn_steps);
  const double gap_h = opts.sample_gap / static_cast<double>(gap_steps);
  parallel::for_each_index(chains, [&](std::size_t c) {
    Stepper stepper(spec);
    CounterRng rng(opts.seed, c);
    Vec x = x0;
    std::size_t step = 0;
    for (std::size_t k = 0; k < burn_steps; ++k) {
      stepper.advance(x, burn_h, rng);
      check_state(x, ++step);
    }
    for (std::size_t s = offset[c]; s < offset[c + 1]; ++s) {
      for (std::size_t k = 0; k < gap_steps; ++k) {
        stepper.advance(x, gap_h, rng);
        check_state(x, ++step);
      }
      samples[s] = x;
    }
  });
  return Measure::samples(std::move(samples));
}

std::int64_t count_jump_events(const SDESpec& spec, double t_end, double dt, std::uint64_t seed,
                               std::uint64_t stream) {
  Stepper stepper(spec);
  CounterRng rng(seed, stream);
  Vec x = Vec::Zero(spec.dim);
  const std::size_t n = step_count(t_end, dt);
  double elapsed = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double next = k == n ? t_end : static_cast<double>(k) * dt;
    stepper.advance(x, next - elapsed, rng);
    elapsed = next;
  }
  return stepper.events_from_l();
}

}  // namespace symcrit

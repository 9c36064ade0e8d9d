#include "symcrit/measure.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "symcrit/errors.hpp"
#include "symcrit/quadrature.hpp"

namespace symcrit {

WeightFunction WeightFunction::one() { return from_polynomial({1.0, 0.0, 0.0}); }

WeightFunction WeightFunction::from_polynomial(const XPolynomial& c) {
  WeightFunction g;
  g.eval = [c](const Vec& x) { return c[0] + x(0) * (c[1] + x(0) * c[2]); };
  g.polynomial = c;
  return g;
}

namespace {

constexpr double kGaussianHalfWidth = 8.5;  // two-sided tail mass ~1.9e-17

double density_oscillation_width(double xi, double scale) {
  return xi == 0.0 ? 0.0 : scale * std::numbers::pi / (4.0 * std::abs(xi));
}

// Tensor-product composite Gauss-Legendre over a box. `panels[j]` panels per axis.
template <class T, class F>
T box_rule(F&& f, const Vec& lo, const Vec& hi, const std::vector<int>& panels, int order) {
  const int d = static_cast<int>(lo.size());
  std::vector<double> gx, gw;
  quad::gauss_legendre(order, gx, gw);
  std::vector<std::vector<double>> nodes(d), weights(d);
  for (int j = 0; j < d; ++j) {
    const double h = (hi(j) - lo(j)) / panels[j];
    for (int p = 0; p < panels[j]; ++p) {
      const double a = lo(j) + p * h;
      for (int k = 0; k < order; ++k) {
        nodes[j].push_back(a + 0.5 * h * (gx[k] + 1.0));
        weights[j].push_back(0.5 * h * gw[k]);
      }
    }
  }
  std::vector<std::size_t> idx(d, 0);
  Vec x(d);
  T sum{};
  while (true) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      x(j) = nodes[j][idx[j]];
      w *= weights[j][idx[j]];
    }
    sum += f(x) * w;
    int j = 0;
    while (j < d && ++idx[j] == nodes[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  return sum;
}

template <class F>
TransformValue box_transform(F&& f, const Vec& lo, const Vec& hi, const Vec& xi, const TransformOptions& opts) {
  const int d = static_cast<int>(lo.size());
  std::vector<int> panels(d);
  for (int j = 0; j < d; ++j) {
    const double w = density_oscillation_width(xi(j), opts.panel_scale);
    panels[j] = w > 0.0 ? std::max(1, static_cast<int>(std::ceil((hi(j) - lo(j)) / w))) : 1;
    panels[j] = std::max(panels[j], 2);
  }
  const cplx coarse = box_rule<cplx>(f, lo, hi, panels, opts.box_order);
  const cplx fine = box_rule<cplx>(f, lo, hi, panels, opts.box_order + 4);
  return {fine, std::abs(fine - coarse)};
}

double density_mass_1d(const std::function<double(double)>& rho, double lo, double hi) {
  quad::Tolerance tol;
  tol.rel = 1e-12;
  tol.abs = 1e-15;
  auto r = quad::integrate_or_throw<double>(rho, lo, hi, tol, "density normalization");
  return r.value;
}

void check_mass(double mass, Measure::Normalization norm) {
  if (!std::isfinite(mass) || !(mass > 0.0)) throw InputError("density must have positive finite mass");
  if (norm == Measure::Normalization::Check && std::abs(mass - 1.0) > 1e-6) {
    throw InputError("density does not integrate to 1 over its support (mass " + std::to_string(mass) + ")");
  }
}

}  // namespace

Measure Measure::density(std::function<double(double)> rho, double lo, double hi, Normalization norm) {
  if (!rho) throw InputError("density function is empty");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw InputError("density support must be a finite interval lo < hi");
  }
  const double mass = density_mass_1d(rho, lo, hi);
  check_mass(mass, norm);
  const double scale = norm == Normalization::Normalize ? 1.0 / mass : 1.0;
  Density d;
  d.pdf = [rho = std::move(rho), scale](const Vec& x) { return scale * rho(x(0)); };
  d.lo = vec1(lo);
  d.hi = vec1(hi);
  d.raw_mass = mass;
  return Measure(std::move(d));
}

Measure Measure::density_box(std::function<double(const Vec&)> rho, Vec lo, Vec hi, Normalization norm) {
  if (!rho) throw InputError("density function is empty");
  if (lo.size() != hi.size() || lo.size() < 1) throw InputError("density box bounds have mismatched sizes");
  if (!lo.allFinite() || !hi.allFinite() || ((hi - lo).array() <= 0.0).any()) {
    throw InputError("density support must be a finite box with lo < hi");
  }
  if (lo.size() == 1) {
    return density([rho](double x) { return rho(vec1(x)); }, lo(0), hi(0), norm);
  }
  TransformOptions opts;
  auto tv = box_transform([&](const Vec& x) { return cplx(rho(x), 0.0); }, lo, hi, Vec::Zero(lo.size()), opts);
  const double mass = tv.value.real();
  check_mass(mass, norm);
  const double scale = norm == Normalization::Normalize ? 1.0 / mass : 1.0;
  Density d;
  d.pdf = [rho = std::move(rho), scale](const Vec& x) { return scale * rho(x); };
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  d.raw_mass = mass;
  return Measure(std::move(d));
}

Measure Measure::gaussian(double mean, double variance) { return gaussian(vec1(mean), vec1(variance)); }

Measure Measure::gaussian(Vec mean, Vec variance) {
  if (mean.size() != variance.size() || mean.size() < 1) throw InputError("Gaussian mean/variance size mismatch");
  if (!mean.allFinite() || !variance.allFinite()) throw InputError("Gaussian parameters must be finite");
  if ((variance.array() <= 0.0).any()) throw InputError("Gaussian variance must be positive");
  return Measure(Gaussian{std::move(mean), std::move(variance)});
}

Measure Measure::samples(const std::vector<double>& points) {
  std::vector<Vec> pts;
  pts.reserve(points.size());
  for (double p : points) pts.push_back(vec1(p));
  return samples(std::move(pts));
}

Measure Measure::samples(std::vector<Vec> points) {
  if (points.empty()) throw InputError("sample measure must be nonempty");
  const auto d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw InputError("samples have inconsistent dimensions");
    if (!p.allFinite()) throw InputError("samples must be finite");
  }
  return Measure(Samples{std::move(points)});
}

Measure Measure::dirac(double at) { return dirac(vec1(at)); }

Measure Measure::dirac(Vec at) {
  if (!at.allFinite()) throw InputError("Dirac location must be finite");
  return Measure(Dirac{std::move(at)});
}

int Measure::dimension() const {
  return std::visit(
      [](const auto& m) -> int {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Density>) return static_cast<int>(m.lo.size());
        else if constexpr (std::is_same_v<M, Gaussian>) return static_cast<int>(m.mean.size());
        else if constexpr (std::is_same_v<M, Samples>) return static_cast<int>(m.points.front().size());
        else return static_cast<int>(m.at.size());
      },
      v_);
}

double Measure::pdf(const Vec& x) const {
  const auto* d = std::get_if<Density>(&v_);
  if (!d) throw InputError("pdf requested from a measure without a density");
  if (x.size() != d->lo.size()) throw InputError("pdf: dimension mismatch");
  if ((x.array() < d->lo.array()).any() || (x.array() > d->hi.array()).any()) return 0.0;
  return d->pdf(x);
}

std::pair<Vec, Vec> Measure::quadrature_box() const {
  return std::visit(
      [](const auto& m) -> std::pair<Vec, Vec> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Density>) {
          return {m.lo, m.hi};
        } else if constexpr (std::is_same_v<M, Gaussian>) {
          const Vec sd = m.variance.array().sqrt();
          return {m.mean - kGaussianHalfWidth * sd, m.mean + kGaussianHalfWidth * sd};
        } else if constexpr (std::is_same_v<M, Samples>) {
          Vec lo = m.points.front(), hi = m.points.front();
          for (const auto& p : m.points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
          }
          return {lo, hi};
        } else {
          return {m.at, m.at};
        }
      },
      v_);
}

Measure load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open samples file '" + path.string() + "'");
  std::vector<Vec> points;
  std::string line;
  std::size_t lineno = 0;
  long cols = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InputError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (cols < 0) cols = static_cast<long>(row.size());
    if (static_cast<long>(row.size()) != cols) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                       " columns");
    }
    points.push_back(Eigen::Map<Vec>(row.data(), cols));
  }
  if (points.empty()) throw InputError("samples file '" + path.string() + "' has no rows");
  return Measure::samples(std::move(points));
}

namespace {

TransformValue gaussian_closed_form(const Measure::Gaussian& g, const XPolynomial& c, double xi) {
  const double m = g.mean(0), v = g.variance(0);
  const cplx phi = std::exp(cplx(-0.5 * v * xi * xi, m * xi));
  const cplx first = cplx(m, v * xi);  // E[x e^{ix xi}] / phi
  const cplx second = v + first * first;  // E[x^2 e^{ix xi}] / phi
  return {(c[0] + c[1] * first + c[2] * second) * phi, 0.0};
}

TransformValue quadrature_1d(const std::function<double(const Vec&)>& pdf, double lo, double hi,
                             const WeightFunction& g, double xi, const TransformOptions& opts) {
  auto integrand = [&](double x) -> cplx {
    const Vec xv = vec1(x);
    const double rho = pdf(xv);
    if (rho == 0.0) return {0.0, 0.0};
    return std::exp(cplx(0.0, x * xi)) * g.eval(xv) * rho;
  };
  const auto breaks = quad::panel_breaks(lo, hi, density_oscillation_width(xi, opts.panel_scale));
  quad::Tolerance tol;
  tol.rel = opts.rel_tol;
  tol.abs = opts.abs_tol;
  tol.max_intervals = std::max(opts.max_intervals, static_cast<int>(breaks.size()) * 8);
  auto r = quad::integrate_or_throw<cplx>(integrand, std::span<const double>(breaks), tol,
                                          "weighted transform at xi=" + std::to_string(xi));
  return {r.value, r.error};
}

}  // namespace

TransformValue weighted_transform(const Measure& mu, const WeightFunction& g, const Vec& xi,
                                  const TransformOptions& opts) {
  if (!g.eval) throw InputError("weight function is empty");
  if (xi.size() != mu.dimension()) throw InputError("weighted_transform: dimension mismatch");
  if (!xi.allFinite()) throw InputError("weighted_transform: xi must be finite");
  return std::visit(
      [&](const auto& m) -> TransformValue {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Measure::Dirac>) {
          return {std::exp(cplx(0.0, m.at.dot(xi))) * g.eval(m.at), 0.0};
        } else if constexpr (std::is_same_v<M, Measure::Samples>) {
          const std::size_t n = m.points.size();
          cplx sum{0.0, 0.0};
          std::vector<cplx> values(n);
          for (std::size_t i = 0; i < n; ++i) {
            values[i] = std::exp(cplx(0.0, m.points[i].dot(xi))) * g.eval(m.points[i]);
            sum += values[i];
          }
          const cplx mean = sum / static_cast<double>(n);
          double ss = 0.0;
          for (const auto& v : values) ss += std::norm(v - mean);
          const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
          return {mean, se};
        } else if constexpr (std::is_same_v<M, Measure::Gaussian>) {
          if (m.mean.size() == 1 && g.polynomial && opts.allow_closed_form) {
            return gaussian_closed_form(m, *g.polynomial, xi(0));
          }
          const Vec sd = m.variance.array().sqrt();
          const Vec lo = m.mean - kGaussianHalfWidth * sd;
          const Vec hi = m.mean + kGaussianHalfWidth * sd;
          const double log_norm = -0.5 * (2.0 * std::numbers::pi * m.variance.array()).log().sum();
          auto pdf = [&](const Vec& x) {
            return std::exp(log_norm - 0.5 * ((x - m.mean).array().square() / m.variance.array()).sum());
          };
          if (m.mean.size() == 1) return quadrature_1d(pdf, lo(0), hi(0), g, xi(0), opts);
          return box_transform([&](const Vec& x) { return std::exp(cplx(0.0, x.dot(xi))) * g.eval(x) * pdf(x); },
                               lo, hi, xi, opts);
        } else {
          if (m.lo.size() == 1) return quadrature_1d(m.pdf, m.lo(0), m.hi(0), g, xi(0), opts);
          return box_transform(
              [&](const Vec& x) { return std::exp(cplx(0.0, x.dot(xi))) * g.eval(x) * m.pdf(x); }, m.lo, m.hi,
              xi, opts);
        }
      },
      mu.variant());
}

TransformValue weighted_transform(const Measure& mu, const WeightFunction& g, double xi,
                                  const TransformOptions& opts) {
  return weighted_transform(mu, g, vec1(xi), opts);
}

TransformValue char_fn(const Measure& mu, const Vec& xi, const TransformOptions& opts) {
  if (mu.dimension() == 1) return weighted_transform(mu, WeightFunction::one(), xi, opts);
  WeightFunction one;
  one.eval = [](const Vec&) { return cplx(1.0, 0.0); };
  if (const auto* g = std::get_if<Measure::Gaussian>(&mu.variant()); g && opts.allow_closed_form) {
    if (xi.size() != g->mean.size()) throw InputError("char_fn: dimension mismatch");
    const double quad = (g->variance.array() * xi.array().square()).sum();
    return {std::exp(cplx(-0.5 * quad, g->mean.dot(xi))), 0.0};
  }
  return weighted_transform(mu, one, xi, opts);
}

TransformValue char_fn(const Measure& mu, double xi, const TransformOptions& opts) {
  return char_fn(mu, vec1(xi), opts);
}

}  // namespace symcrit

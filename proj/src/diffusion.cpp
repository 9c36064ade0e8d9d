#include "symcrit/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symcrit/errors.hpp"
#include "symcrit/quadrature.hpp"

namespace symcrit {

namespace {

constexpr int kNodes = 24;
constexpr double kPanelWidth = 0.5;
constexpr int kMaxPanels = 4000;
constexpr int kGradedPanels = 40;
constexpr double kDecay = 1e-12;
constexpr double kMaxReach = 1e4;
constexpr double kDivergence = 1e12;

quad::Tolerance fine_tolerance() {
  quad::Tolerance tol;
  tol.rel = 1e-13;
  tol.abs = 1e-15;
  return tol;
}

double sigma_checked(const Diffusion1D& diff, double u) {
  const double s = diff.volatility(u);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InputError("volatility must be positive and finite on the support (x = " + std::to_string(u) + ")");
  }
  return s;
}

double log_ratio_integrand(const Diffusion1D& diff, double u) {
  const double s = sigma_checked(diff, u);
  const double v = 2.0 * diff.drift(u) / (s * s);
  if (!std::isfinite(v)) throw EvaluationError("2 b / sigma^2 is not finite at x = " + std::to_string(u));
  return v;
}

// Aims at fine_tolerance(); an integrand that is only accurate to a few digits
// (sigma evaluated next to a boundary) is accepted down to 1e-9 relative.
template <class F>
double accurate_integral(F&& f, double lo, double hi) {
  const auto r = quad::integrate<double>(f, lo, hi, fine_tolerance());
  if (!std::isfinite(r.value) || !(r.converged || r.error <= 1e-9 * std::max(1.0, std::abs(r.value)))) {
    throw EvaluationError("scale density: quadrature did not converge on [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  }
  return r.value;
}

// int_a^b 2 b / sigma^2 du.
double drift_integral(const Diffusion1D& diff, double a, double b) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  auto f = [&diff](double u) { return log_ratio_integrand(diff, u); };
  return sign * accurate_integral(f, std::min(a, b), std::max(a, b));
}

// Same integral between points close to a finite boundary, in the variable
// t = log|u - boundary| so that 1 / (u - boundary) behaviour stays smooth.
double drift_integral_near(const Diffusion1D& diff, double a, double b, double boundary) {
  if (a == b) return 0.0;
  const double side = a > boundary ? 1.0 : -1.0;
  const double ta = std::log(std::abs(a - boundary)), tb = std::log(std::abs(b - boundary));
  auto f = [&](double t) {
    const double e = std::exp(t);
    return log_ratio_integrand(diff, boundary + side * e) * e * side;
  };
  const double sign = ta < tb ? 1.0 : -1.0;
  // Accuracy here is bounded by rounding of u - boundary inside the coefficient
  // functions, so only a finite value is required.
  quad::Tolerance tol = fine_tolerance();
  tol.max_intervals = 200;
  const auto r = quad::integrate<double>(f, std::min(ta, tb), std::max(ta, tb), tol);
  if (!std::isfinite(r.value)) throw EvaluationError("scale density is not finite next to the boundary");
  return sign * r.value;
}

void require_in_support(const Diffusion1D& diff, double x) {
  if (!std::isfinite(x) || x < diff.lo || x > diff.hi) throw InputError("x lies outside the diffusion support");
}

double chebyshev_node(int j) { return std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * kNodes)); }

}  // namespace

void Diffusion1D::validate() const {
  if (!drift || !volatility) throw InputError("diffusion needs both b and sigma");
  if (!(lo < hi)) throw InputError("diffusion support must be a nonempty interval");
  if (!std::isfinite(x0) || !(x0 > lo) || !(x0 < hi)) throw InputError("x0 must lie inside the support");
  sigma_checked(*this, x0);
}

double scale_density(const Diffusion1D& diff, double x) {
  diff.validate();
  require_in_support(diff, x);
  if (x == diff.x0) return 1.0;
  return std::exp(-drift_integral(diff, diff.x0, x));
}

double speed_density(const Diffusion1D& diff, double x) {
  diff.validate();
  require_in_support(diff, x);
  const double s = sigma_checked(diff, x);
  const double i = x == diff.x0 ? 0.0 : drift_integral(diff, diff.x0, x);
  return std::exp(i - 2.0 * std::log(s));
}

StationaryDensity::StationaryDensity(const Diffusion1D& diff) : diff_(diff) {
  diff_.validate();
  const double x0 = diff_.x0;
  const double log_m0 = -2.0 * std::log(sigma_checked(diff_, x0));

  // Truncate infinite sides where m has decayed by kDecay relative to m(x0).
  auto find_edge = [&](double direction, double bound) {
    if (std::isfinite(bound)) return bound;
    for (double reach = 1.0; reach <= kMaxReach; reach *= 2.0) {
      const double x = x0 + direction * reach;
      const double log_m = drift_integral(diff_, x0, x) - 2.0 * std::log(sigma_checked(diff_, x));
      if (log_m - log_m0 < std::log(kDecay)) return x;
    }
    throw HypothesisViolation("speed density does not decay: the speed measure M is not finite");
  };
  lo_ = find_edge(-1.0, diff_.lo);
  hi_ = find_edge(1.0, diff_.hi);

  // Uniform panels of width <= kPanelWidth; the end panels at a finite boundary
  // are split geometrically so that log-type singularities of I stay resolved.
  const int uniform = std::clamp(static_cast<int>(std::ceil((hi_ - lo_) / kPanelWidth)), 1, kMaxPanels);
  const double w = (hi_ - lo_) / uniform;
  const bool grade_lo = std::isfinite(diff_.lo), grade_hi = std::isfinite(diff_.hi);
  // Grading stops where the distance to the boundary nears its rounding unit.
  auto depth = [w](double bound) {
    const double floor_gap = 1e-8 * std::max(1.0, std::abs(bound));
    return std::clamp(static_cast<int>(std::floor(std::log2(w / floor_gap))), 1, kGradedPanels);
  };
  std::vector<double> breaks{lo_};
  if (grade_lo) {
    for (int k = depth(lo_); k >= 1; --k) breaks.push_back(lo_ + std::ldexp(w, -k));
  }
  for (int p = 1; p < uniform; ++p) breaks.push_back(lo_ + p * w);
  if (grade_hi) {
    for (int k = 1; k <= depth(hi_); ++k) breaks.push_back(hi_ - std::ldexp(w, -k));
  }
  breaks.push_back(hi_);
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks_ = breaks;
  direct_lo_ = grade_lo;
  direct_hi_ = grade_hi;
  const int panels = static_cast<int>(breaks_.size()) - 1;
  values_.assign(static_cast<std::size_t>(panels) * kNodes, 0.0);

  // Nodes in ascending order with their storage slot; integrate outward from x0.
  std::vector<std::pair<double, std::size_t>> nodes;
  nodes.reserve(values_.size() + 2);
  for (int p = 0; p < panels; ++p) {
    const double mid = 0.5 * (breaks_[p] + breaks_[p + 1]), half = 0.5 * (breaks_[p + 1] - breaks_[p]);
    for (int j = kNodes - 1; j >= 0; --j) {
      nodes.emplace_back(mid + half * chebyshev_node(j), static_cast<std::size_t>(p) * kNodes + j);
    }
  }
  // Anchors for the directly evaluated end slivers.
  const std::size_t lo_slot = values_.size(), hi_slot = values_.size() + 1;
  values_.resize(values_.size() + 2, 0.0);
  if (direct_lo_) nodes.emplace_back(breaks_[1], lo_slot);
  if (direct_hi_) nodes.emplace_back(breaks_[panels - 1], hi_slot);
  std::sort(nodes.begin(), nodes.end());
  const auto split = std::lower_bound(nodes.begin(), nodes.end(), std::pair<double, std::size_t>{x0, 0});
  double prev = x0, acc = 0.0;
  for (auto it = split; it != nodes.end(); ++it) {
    acc += drift_integral(diff_, prev, it->first);
    values_[it->second] = acc;
    prev = it->first;
  }
  prev = x0;
  acc = 0.0;
  for (auto it = std::make_reverse_iterator(split); it != nodes.rend(); ++it) {
    acc += drift_integral(diff_, prev, it->first);
    values_[it->second] = acc;
    prev = it->first;
  }
  anchor_lo_ = values_[lo_slot];
  anchor_hi_ = values_[hi_slot];
  values_.resize(values_.size() - 2);
  i_x0_ = integral(x0);

  quad::Tolerance tol;
  tol.rel = 1e-12;
  tol.abs = 0.0;
  auto m = [this](double x) { return speed(x); };
  const auto r = quad::integrate<double>(m, std::span<const double>(breaks_), tol);
  if (!std::isfinite(r.value) || !(r.value > 0.0) || !r.converged) {
    throw HypothesisViolation("speed measure M could not be integrated to a finite positive value");
  }
  mass_ = r.value;
  mass_error_ = r.error;

  // Divergence indicator for int s dx: the table window first, then outward windows.
  auto s_table = [this](double x) { return std::exp(-(integral(x) - i_x0_)); };
  // An evaluation failure next to a boundary means s blows up there.
  try {
    quad::Tolerance s_tol = tol;
    s_tol.max_intervals = 4 * static_cast<int>(breaks_.size()) + 400;
    const auto r = quad::integrate<double>(s_table, std::span<const double>(breaks_), s_tol);
    scale_integral_ = r.converged ? r.value : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    scale_integral_ = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(scale_integral_) || scale_integral_ > kDivergence) {
    scale_diverges_ = true;
    return;
  }
  auto s_direct = [this](double x) { return std::exp(-drift_integral(diff_, diff_.x0, x)); };
  double left = lo_, right = hi_;
  for (double reach = 2.0 * std::max(x0 - lo_, hi_ - x0); reach <= kMaxReach; reach *= 2.0) {
    const double new_left = std::max(diff_.lo, x0 - reach), new_right = std::min(diff_.hi, x0 + reach);
    if (new_left == left && new_right == right) break;
    try {
      if (new_left < left) scale_integral_ += quad::integrate<double>(s_direct, new_left, left, tol).value;
      if (new_right > right) scale_integral_ += quad::integrate<double>(s_direct, right, new_right, tol).value;
    } catch (const Error&) {
      scale_integral_ = std::numeric_limits<double>::infinity();
    }
    left = new_left;
    right = new_right;
    if (!std::isfinite(scale_integral_) || scale_integral_ > kDivergence) {
      scale_diverges_ = true;
      return;
    }
  }
}

double StationaryDensity::integral(double x) const {
  const int panels = static_cast<int>(breaks_.size()) - 1;
  const int p = std::clamp(
      static_cast<int>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin()) - 1, 0, panels - 1);
  if (direct_lo_ && p == 0) return anchor_lo_ + drift_integral_near(diff_, breaks_[1], x, diff_.lo);
  if (direct_hi_ && p == panels - 1) {
    return anchor_hi_ + drift_integral_near(diff_, breaks_[panels - 1], x, diff_.hi);
  }
  const double half = 0.5 * (breaks_[p + 1] - breaks_[p]);
  const double t = (x - (breaks_[p] + half)) / half;
  const double* v = &values_[static_cast<std::size_t>(p) * kNodes];
  double num = 0.0, den = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    const double diff = t - chebyshev_node(j);
    if (diff == 0.0) return v[j];
    const double w = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin((2.0 * j + 1.0) * std::numbers::pi / (2.0 * kNodes)) / diff;
    num += w * v[j];
    den += w;
  }
  return num / den;
}

double StationaryDensity::log_speed(double x) const {
  return (integral(x) - i_x0_) - 2.0 * std::log(sigma_checked(diff_, x));
}

double StationaryDensity::speed(double x) const {
  if (!(x >= lo_ && x <= hi_)) return 0.0;
  return std::exp(log_speed(x));
}

double StationaryDensity::operator()(double x) const { return speed(x) / mass_; }

double fokker_planck_residual(const Diffusion1D& diff, const std::function<double(double)>& pi, double x) {
  diff.validate();
  if (!pi) throw InputError("fokker_planck_residual: density is empty");
  const double h = 1e-5 * (1.0 + std::abs(x));
  if (!std::isfinite(x) || !(x - h > diff.lo) || !(x + h < diff.hi)) {
    throw InputError("fokker_planck_residual: finite-difference stencil leaves the support");
  }
  auto flux = [&](double y) {
    const double s = sigma_checked(diff, y);
    return 0.5 * s * s * pi(y);
  };
  const double derivative = (flux(x + h) - flux(x - h)) / (2.0 * h);
  return std::abs(derivative - diff.drift(x) * pi(x));
}

}  // namespace symcrit

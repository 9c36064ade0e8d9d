#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with global error control,
// in the QUADPACK qag style, for real- and complex-valued integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "symcrit/errors.hpp"

namespace symcrit::quad {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
  int max_intervals = 20000;
  // Roundoff floor relative to the integral of |f|; oscillatory integrals that
  // cancel to ~0 cannot be resolved below this.
  double l1_floor = 100.0 * std::numeric_limits<double>::epsilon();
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

// QUADPACK's scaled error estimate for one real component.
inline double scaled_error(double diff, double resabs, double resasc) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  double err = std::abs(diff);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return err;
}

template <class T>
struct Panel {
  double a = 0, b = 0;
  T value{};
  double error = 0;
  double l1 = 0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<T, 15> fv;
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  T resk = fv[7] * kKronrodWeights[7];
  T resg = fv[7] * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    resk += (fv[j] + fv[14 - j]) * kKronrodWeights[j];
    if (j % 2 == 1) resg += (fv[j] + fv[14 - j]) * kGaussWeights[j / 2];
  }
  const T mean = resk * 0.5;
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.value = resk * half;
  const double h = std::abs(half);
  if constexpr (std::is_same_v<T, double>) {
    double resabs = 0, resasc = 0;
    for (int j = 0; j < 15; ++j) {
      const double w = kKronrodWeights[j < 8 ? j : 14 - j];
      resabs += w * std::abs(fv[j]);
      resasc += w * std::abs(fv[j] - mean);
    }
    p.error = scaled_error((resk - resg) * half, resabs * h, resasc * h);
    p.l1 = resabs * h;
  } else {
    double abs_re = 0, asc_re = 0, abs_im = 0, asc_im = 0, l1 = 0;
    for (int j = 0; j < 15; ++j) {
      const double w = kKronrodWeights[j < 8 ? j : 14 - j];
      abs_re += w * std::abs(fv[j].real());
      abs_im += w * std::abs(fv[j].imag());
      asc_re += w * std::abs(fv[j].real() - mean.real());
      asc_im += w * std::abs(fv[j].imag() - mean.imag());
      l1 += w * std::abs(fv[j]);
    }
    const T diff = (resk - resg) * half;
    p.error = scaled_error(diff.real(), abs_re * h, asc_re * h) +
              scaled_error(diff.imag(), abs_im * h, asc_im * h);
    p.l1 = l1 * h;
  }
  return p;
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], using every entry of
/// `breaks` as an initial panel boundary. Breakpoints must be increasing and finite.
/// Returns the result with converged=false when max_intervals is exhausted;
/// callers decide whether that is an error (see integrate_or_throw).
template <class T, class F>
Result<T> integrate(F&& f, std::span<const double> breaks, const Tolerance& tol = {}) {
  Result<T> out;
  if (breaks.size() < 2) return out;
  std::priority_queue<detail::Panel<T>> heap;
  T total{};
  double total_err = 0, total_l1 = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto p = detail::gk15<T>(f, breaks[i], breaks[i + 1]);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(p);
  }
  int n = static_cast<int>(heap.size());
  auto target = [&] {
    return std::max({tol.abs, tol.rel * detail::magnitude(total), tol.l1_floor * total_l1});
  };
  while (total_err > target() && n < tol.max_intervals && !heap.empty()) {
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  // Re-sum from scratch to shed accumulated update roundoff.
  T sum{};
  double err = 0, l1 = 0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  out.l1 = l1;
  out.intervals = n;
  const bool finite = std::isfinite(detail::magnitude(sum)) && std::isfinite(err);
  out.converged = finite && err <= std::max({tol.abs, tol.rel * detail::magnitude(sum), tol.l1_floor * l1});
  return out;
}

template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  const std::array<double, 2> br{a, b};
  return integrate<T>(std::forward<F>(f), std::span<const double>(br), tol);
}

/// Same as integrate, but throws EvaluationError on non-convergence.
template <class T, class F>
Result<T> integrate_or_throw(F&& f, std::span<const double> breaks, const Tolerance& tol,
                             const std::string& context) {
  auto r = integrate<T>(std::forward<F>(f), breaks, tol);
  if (!r.converged) {
    throw EvaluationError(context + ": quadrature did not converge (estimate error " +
                          std::to_string(r.error) + " after " + std::to_string(r.intervals) +
                          " intervals)");
  }
  return r;
}

template <class T, class F>
Result<T> integrate_or_throw(F&& f, double a, double b, const Tolerance& tol,
                             const std::string& context) {
  const std::array<double, 2> br{a, b};
  return integrate_or_throw<T>(std::forward<F>(f), std::span<const double>(br), tol, context);
}

/// Panel boundaries over [a, b] with width at most max_width, merged with extra
/// interior breakpoints (values outside (a, b) are ignored).
std::vector<double> panel_breaks(double a, double b, double max_width,
                                 std::span<const double> extra = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace symcrit::quad

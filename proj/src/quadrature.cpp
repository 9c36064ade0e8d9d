#include "symcrit/quadrature.hpp"

#include <numbers>

namespace symcrit::quad {

std::vector<double> panel_breaks(double a, double b, double max_width, std::span<const double> extra) {
  std::vector<double> out;
  if (!(b > a)) return {a, b};
  std::size_t panels = 1;
  if (std::isfinite(max_width) && max_width > 0.0) {
    panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    panels = std::clamp<std::size_t>(panels, 1, 1u << 20);
  }
  out.reserve(panels + 1 + extra.size());
  for (std::size_t i = 0; i <= panels; ++i) {
    out.push_back(i == panels ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(panels));
  }
  for (double e : extra) {
    if (e > a && e < b) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace symcrit::quad

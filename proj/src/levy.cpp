#include "symcrit/levy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "symcrit/errors.hpp"
#include "symcrit/quadrature.hpp"

namespace symcrit {

AtomicJumps::AtomicJumps(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InputError("atomic jump measure needs at least one atom");
  dim_ = static_cast<int>(atoms_.front().location.size());
  if (dim_ < 1) throw InputError("atom location must be non-empty");
  for (const auto& a : atoms_) {
    if (a.location.size() != dim_) throw InputError("atoms have inconsistent dimensions");
    if (!a.location.allFinite()) throw InputError("atom location must be finite");
    if (a.location.norm() == 0.0) throw InputError("jump measure cannot charge the origin");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw InputError("atom masses must be positive and finite");
  }
}

double AtomicJumps::total_mass() const {
  double m = 0;
  for (const auto& a : atoms_) m += a.mass;
  return m;
}

Vec AtomicJumps::compensator() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& a : atoms_) {
    if (Cutoff::inside(a.location)) c += a.mass * a.location;
  }
  return c;
}

AnnulusJumps::AnnulusJumps(std::function<double(double)> density, double inner, double outer,
                           double small_jump_variance)
    : density_(std::move(density)), inner_(inner), outer_(outer), small_jump_variance_(small_jump_variance) {
  if (!density_) throw InputError("annulus jump density is empty");
  if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer)) {
    throw InputError("annulus needs 0 < inner < outer < inf");
  }
  if (!(small_jump_variance >= 0.0) || !std::isfinite(small_jump_variance)) {
    throw InputError("small-jump variance must be finite and non-negative");
  }
}

StableJumps::StableJumps(double alpha, double scale, int dim) : alpha_(alpha), scale_(scale), dim_(dim) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InputError("stable index must lie in (0, 2)");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InputError("stable scale must be finite and >= 0");
  if (dim < 1) throw InputError("stable dimension must be positive");
}

int jump_dimension(const JumpMeasure& jumps) {
  return std::visit(
      [](const auto& j) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(j)>, NoJumps>) {
          return 0;
        } else {
          return j.dimension();
        }
      },
      jumps);
}

bool has_jumps(const JumpMeasure& jumps) { return !std::holds_alternative<NoJumps>(jumps); }

void require_psd(const Mat& q, const char* what) {
  if (q.rows() != q.cols()) throw InputError(std::string(what) + " must be square");
  if (!q.allFinite()) throw InputError(std::string(what) + " must be finite");
  if (q.rows() == 1) {
    if (q(0, 0) < -1e-12) throw InputError(std::string(what) + " must be positive semi-definite");
    return;
  }
  const Mat sym = 0.5 * (q + q.transpose());
  if ((sym - q).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q.cwiseAbs().maxCoeff())) {
    throw InputError(std::string(what) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw InputError(std::string(what) + " must be positive semi-definite");
  }
}

LevyTriplet::LevyTriplet(Vec drift, Mat gaussian, JumpMeasure jumps)
    : drift_(std::move(drift)), gaussian_(std::move(gaussian)), jumps_(std::move(jumps)) {
  const int d = static_cast<int>(drift_.size());
  if (d < 1) throw InputError("Levy triplet dimension must be positive");
  if (!drift_.allFinite()) throw InputError("Levy drift must be finite");
  if (gaussian_.rows() != d || gaussian_.cols() != d) throw InputError("Gaussian part has wrong shape");
  require_psd(gaussian_, "Gaussian covariance");
  const int jd = jump_dimension(jumps_);
  if (jd != 0 && jd != d) throw InputError("jump measure dimension does not match drift");
}

LevyTriplet LevyTriplet::zero(int dim) { return {Vec::Zero(dim), Mat::Zero(dim, dim)}; }

LevyTriplet LevyTriplet::brownian(double variance) {
  return {Vec::Zero(1), Mat::Constant(1, 1, variance)};
}

LevyTriplet LevyTriplet::brownian(const Mat& covariance) {
  return {Vec::Zero(covariance.rows()), covariance};
}

LevyTriplet LevyTriplet::pure_drift(double drift) { return {vec1(drift), Mat::Zero(1, 1)}; }

LevyTriplet LevyTriplet::stable(double alpha, double scale, int dim) {
  return {Vec::Zero(dim), Mat::Zero(dim, dim), StableJumps(alpha, scale, dim)};
}

LevyTriplet LevyTriplet::atoms(std::vector<Atom> atoms, double drift, double variance) {
  return {vec1(drift), Mat::Constant(1, 1, variance), AtomicJumps(std::move(atoms))};
}

Mat LevyTriplet::effective_gaussian() const {
  Mat q = gaussian_;
  if (const auto* a = std::get_if<AnnulusJumps>(&jumps_)) q(0, 0) += a->small_jump_variance();
  return q;
}

namespace {

cplx annulus_exponent(const AnnulusJumps& a, double xi) {
  // The small-jump moment enters through the Gaussian part; here only the
  // annulus inner <= |y| <= outer is integrated.
  auto integrand = [&](double y) -> cplx {
    const double n = a.density(y);
    const double u = xi * y;
    const double comp = Cutoff::inside(y) ? u : 0.0;
    return cplx(std::cos(u) - 1.0, std::sin(u) - comp) * n;
  };
  quad::Tolerance tol;
  tol.rel = 1e-9;
  tol.abs = 1e-14;
  const double width = xi == 0.0 ? 0.0 : std::numbers::pi / (4.0 * std::abs(xi));
  const std::array<double, 1> unit_pos{1.0};
  const std::array<double, 1> unit_neg{-1.0};
  auto right = quad::panel_breaks(a.inner(), a.outer(), width, unit_pos);
  auto left = quad::panel_breaks(-a.outer(), -a.inner(), width, unit_neg);
  auto r1 = quad::integrate_or_throw<cplx>(integrand, std::span<const double>(right), tol,
                                           "annulus jump integral (y > 0)");
  auto r2 = quad::integrate_or_throw<cplx>(integrand, std::span<const double>(left), tol,
                                           "annulus jump integral (y < 0)");
  return -(r1.value + r2.value);
}

}  // namespace

cplx jump_exponent(const JumpMeasure& jumps, const Vec& xi) {
  return std::visit(
      [&](const auto& j) -> cplx {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<J, AtomicJumps>) {
          cplx sum{0.0, 0.0};
          for (const auto& atom : j.atoms()) {
            const double u = xi.dot(atom.location);
            const double comp = Cutoff::inside(atom.location) ? u : 0.0;
            sum += atom.mass * cplx(std::cos(u) - 1.0, std::sin(u) - comp);
          }
          return -sum;
        } else if constexpr (std::is_same_v<J, AnnulusJumps>) {
          return annulus_exponent(j, xi(0));
        } else {
          return {j.scale() * std::pow(xi.norm(), j.alpha()), 0.0};
        }
      },
      jumps);
}

cplx levy_exponent(const LevyTriplet& triplet, const Vec& xi) {
  if (xi.size() != triplet.dimension()) throw InputError("levy_exponent: dimension mismatch");
  if (!xi.allFinite()) throw InputError("levy_exponent: xi must be finite");
  const double drift = triplet.drift().dot(xi);
  const double quadratic = 0.5 * xi.dot(triplet.effective_gaussian() * xi);
  return cplx(quadratic, -drift) + jump_exponent(triplet.jumps(), xi);
}

cplx levy_exponent(const LevyTriplet& triplet, double xi) { return levy_exponent(triplet, vec1(xi)); }

double stable_constant(double alpha, int dim) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InputError("stable_constant: alpha must lie in (0, 2)");
  if (dim < 1) throw InputError("stable_constant: dimension must be positive");
  // Radial reduction: int (1 - cos(u'y)) |y|^{-d-alpha} dy
  //   = pi^{d/2} Gamma(1 - alpha/2) / (alpha 2^{alpha-1} Gamma((d+alpha)/2)).
  const double d = dim;
  const double log_mag = 0.5 * d * std::log(std::numbers::pi) + std::lgamma(1.0 - 0.5 * alpha) -
                         std::log(alpha) - (alpha - 1.0) * std::log(2.0) - std::lgamma(0.5 * (d + alpha));
  return -std::exp(log_mag);
}

}  // namespace symcrit

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "symcrit/types.hpp"

namespace symcrit {

/// Truncation function of the Levy-Khintchine compensation term. Fixed to the
/// indicator of the open unit ball.
struct Cutoff {
  static bool inside(const Vec& y) { return y.norm() < 1.0; }
  static bool inside(double y) { return std::abs(y) < 1.0; }
};

struct NoJumps {};

struct Atom {
  Vec location;
  double mass = 0.0;
};

/// Finite jump measure sum_i r_i delta_{y_i}.
class AtomicJumps {
 public:
  explicit AtomicJumps(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int dimension() const { return dim_; }
  double total_mass() const;
  /// sum_i r_i y_i 1{|y_i| < 1}: drift removed by the compensation term.
  Vec compensator() const;

 private:
  std::vector<Atom> atoms_;
  int dim_ = 1;
};

/// One-dimensional Levy density n(y) on inner <= |y| <= outer. Jumps below
/// `inner` are represented by their declared second moment
/// small_jump_variance = int_{|y|<inner} y^2 N(dy), added to the Gaussian part.
class AnnulusJumps {
 public:
  AnnulusJumps(std::function<double(double)> density, double inner, double outer,
               double small_jump_variance = 0.0);

  double density(double y) const { return density_(y); }
  double inner() const { return inner_; }
  double outer() const { return outer_; }
  double small_jump_variance() const { return small_jump_variance_; }
  int dimension() const { return 1; }

 private:
  std::function<double(double)> density_;
  double inner_;
  double outer_;
  double small_jump_variance_;
};

/// Rotationally symmetric alpha-stable jumps with exponent contribution
/// scale * |xi|^alpha, i.e. Levy measure (scale / -c_alpha) |y|^{-(d+alpha)} dy.
class StableJumps {
 public:
  StableJumps(double alpha, double scale, int dim = 1);

  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  int dimension() const { return dim_; }

 private:
  double alpha_;
  double scale_;
  int dim_;
};

using JumpMeasure = std::variant<NoJumps, AtomicJumps, AnnulusJumps, StableJumps>;

/// Dimension of a jump measure; 0 for NoJumps (compatible with any dimension).
int jump_dimension(const JumpMeasure& jumps);
bool has_jumps(const JumpMeasure& jumps);

/// Characteristic triplet (drift, Gaussian covariance, jump measure), per unit time.
class LevyTriplet {
 public:
  LevyTriplet(Vec drift, Mat gaussian, JumpMeasure jumps = NoJumps{});

  static LevyTriplet zero(int dim = 1);
  static LevyTriplet brownian(double variance = 1.0);
  static LevyTriplet brownian(const Mat& covariance);
  static LevyTriplet pure_drift(double drift);
  static LevyTriplet stable(double alpha, double scale = 1.0, int dim = 1);
  static LevyTriplet atoms(std::vector<Atom> atoms, double drift = 0.0, double variance = 0.0);

  const Vec& drift() const { return drift_; }
  const Mat& gaussian() const { return gaussian_; }
  const JumpMeasure& jumps() const { return jumps_; }
  int dimension() const { return static_cast<int>(drift_.size()); }

  /// Gaussian covariance including the small-jump correction of annulus measures.
  Mat effective_gaussian() const;

 private:
  Vec drift_;
  Mat gaussian_;
  JumpMeasure jumps_;
};

/// Checks that q is symmetric positive semi-definite (eigenvalues >= -1e-12
/// after symmetrization); throws InputError naming `what` otherwise.
void require_psd(const Mat& q, const char* what);

/// -int (e^{i xi'y} - 1 - i xi'y 1{|y|<1}) N(dy), the jump part of the exponent.
cplx jump_exponent(const JumpMeasure& jumps, const Vec& xi);

/// Levy-Khintchine exponent psi(xi) = -i l'xi + xi'Q xi / 2 + jump part.
cplx levy_exponent(const LevyTriplet& triplet, const Vec& xi);
cplx levy_exponent(const LevyTriplet& triplet, double xi);

/// c_alpha = int (cos(u'y) - 1) |y|^{-(d+alpha)} dy for any unit vector u.
/// Strictly negative for alpha in (0, 2).
double stable_constant(double alpha, int dim = 1);

}  // namespace symcrit

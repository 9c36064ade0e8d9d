#include "symcrit/symbol.hpp"

#include "symcrit/errors.hpp"

namespace symcrit {

const char* to_string(SymbolForm form) {
  switch (form) {
    case SymbolForm::FromCharacteristics: return "from-characteristics";
    case SymbolForm::LevyConstant: return "levy";
    case SymbolForm::OuType: return "ou-type";
    case SymbolForm::Additive: return "additive";
    case SymbolForm::Diffusion: return "diffusion";
    case SymbolForm::Gou: return "gou";
    case SymbolForm::Custom: return "custom";
  }
  return "unknown";
}

const char* to_string(Convention c) { return c == Convention::Canonical ? "canonical" : "doubled"; }

// ---------------------------------------------------------------------------
// MatrixField

MatrixField::MatrixField(Fn fn, int rows, int cols, bool bounded)
    : fn_(std::move(fn)), rows_(rows), cols_(cols), bounded_(bounded) {
  if (!fn_) throw InputError("matrix field is empty");
  if (rows < 1 || cols < 1) throw InputError("matrix field shape must be positive");
}

MatrixField MatrixField::constant(const Mat& value) {
  MatrixField f([value](const Vec&) { return value; }, static_cast<int>(value.rows()),
                static_cast<int>(value.cols()), true);
  if (value.rows() == 1 && value.cols() == 1) {
    f.affine_ = std::array<double, 2>{value(0, 0), 0.0};
    const double c = value(0, 0);
    f.scalar_fn_ = [c](double) { return c; };
  }
  return f;
}

MatrixField MatrixField::constant(double value) { return constant(Mat::Constant(1, 1, value)); }

MatrixField MatrixField::affine(double c0, double c1) {
  MatrixField f([c0, c1](const Vec& x) { return Mat::Constant(1, 1, c0 + c1 * x(0)); }, 1, 1, c1 == 0.0);
  f.affine_ = std::array<double, 2>{c0, c1};
  f.scalar_fn_ = [c0, c1](double x) { return c0 + c1 * x; };
  return f;
}

MatrixField MatrixField::scalar(std::function<double(double)> fn, bool bounded) {
  if (!fn) throw InputError("matrix field is empty");
  MatrixField f([fn](const Vec& x) { return Mat::Constant(1, 1, fn(x(0))); }, 1, 1, bounded);
  f.scalar_fn_ = std::move(fn);
  return f;
}

Mat MatrixField::operator()(const Vec& x) const {
  if (!fn_) throw InputError("matrix field is empty");
  Mat m = fn_(x);
  if (m.rows() != rows_ || m.cols() != cols_) throw InputError("matrix field returned wrong shape");
  return m;
}

double MatrixField::scalar_at(double x) const {
  if (rows_ != 1 || cols_ != 1) throw InputError("scalar_at on a non-scalar field");
  if (scalar_fn_) return scalar_fn_(x);
  return (*this)(vec1(x))(0, 0);
}

// ---------------------------------------------------------------------------
// Symbol

Symbol::Symbol(int dim, SymbolForm form, EvalFn eval, PolyFn x_polynomial, std::vector<std::string> notes)
    : dim_(dim), form_(form), eval_(std::move(eval)), poly_(std::move(x_polynomial)), notes_(std::move(notes)) {
  if (dim < 1) throw InputError("symbol dimension must be positive");
  if (!eval_) throw InputError("symbol evaluator is empty");
  if (poly_ && dim != 1) throw InputError("x-polynomial structure is only defined in one dimension");
}

cplx Symbol::operator()(const Vec& x, const Vec& xi) const {
  if (x.size() != dim_ || xi.size() != dim_) throw InputError("symbol evaluation: dimension mismatch");
  return eval_(x, xi);
}

cplx Symbol::operator()(double x, double xi) const { return (*this)(vec1(x), vec1(xi)); }

XPolynomial Symbol::x_polynomial(double xi) const {
  if (!poly_) throw InputError("symbol has no declared x-polynomial structure");
  return poly_(xi);
}

cplx symbol_eval(const Symbol& sym, const Vec& x, const Vec& xi) { return sym(x, xi); }

namespace {

void require_dim(const LevyTriplet& t, int n, const char* what) {
  if (t.dimension() != n) throw InputError(std::string(what) + ": driver dimension does not match");
}

std::vector<std::string> driver_notes(const LevyTriplet& driver, const MatrixField& phi, bool linear_drift) {
  std::vector<std::string> notes;
  if (!phi.declared_bounded()) {
    notes.emplace_back(
        "Phi is not declared bounded: the bounded, locally Lipschitz coefficient hypothesis is unchecked.");
  }
  if (const auto* s = std::get_if<StableJumps>(&driver.jumps())) {
    if (s->alpha() <= 1.0 && linear_drift) {
      notes.emplace_back(
          "stable driver with alpha <= 1 has infinite first moment: the configuration lies outside the "
          "E|L_1| < inf hypothesis and the criterion integral may not exist.");
    }
  }
  return notes;
}

// psi(u) = -i l u + Q u^2 / 2 for a jump-free one-dimensional triplet.
std::array<cplx, 2> gaussian_coefficients(const LevyTriplet& t) {
  return {cplx(0.0, -t.drift()(0)), cplx(0.5 * t.gaussian()(0, 0), 0.0)};
}

}  // namespace

Symbol symbol_from_characteristics(DifferentialCharacteristics chars) {
  if (chars.dim < 1) throw InputError("characteristics dimension must be positive");
  if (!chars.ell || !chars.q) throw InputError("characteristics need both l(x) and Q(x)");
  const int d = chars.dim;
  auto eval = [chars](const Vec& x, const Vec& xi) -> cplx {
    const Vec ell = chars.ell(x);
    const Mat q = chars.q(x);
    if (ell.size() != chars.dim || q.rows() != chars.dim || q.cols() != chars.dim) {
      throw InputError("characteristics returned wrong shapes");
    }
    require_psd(q, "Q(x)");
    cplx p(0.5 * xi.dot(q * xi), -ell.dot(xi));
    if (chars.jumps) {
      const JumpMeasure n = chars.jumps(x);
      const int jd = jump_dimension(n);
      if (jd != 0 && jd != chars.dim) throw InputError("N(x, dy) has wrong dimension");
      if (const auto* a = std::get_if<AnnulusJumps>(&n)) p += 0.5 * a->small_jump_variance() * xi(0) * xi(0);
      p += jump_exponent(n, xi);
    }
    return p;
  };
  std::vector<std::string> notes{
      "fine continuity of the differential characteristics is assumed, not verified."};
  if (!chars.bounded) {
    notes.emplace_back(
        "characteristics are not declared bounded: the bounded-characteristics hypothesis is unchecked.");
  }
  return Symbol(d, SymbolForm::FromCharacteristics, std::move(eval), {}, std::move(notes));
}

Symbol symbol_levy(const LevyTriplet& triplet) {
  auto eval = [triplet](const Vec&, const Vec& xi) { return levy_exponent(triplet, xi); };
  Symbol::PolyFn poly;
  if (triplet.dimension() == 1) {
    poly = [triplet](double xi) -> XPolynomial { return {levy_exponent(triplet, xi), 0.0, 0.0}; };
  }
  return Symbol(triplet.dimension(), SymbolForm::LevyConstant, std::move(eval), std::move(poly));
}

Symbol symbol_zero(int dim) {
  Symbol::PolyFn poly;
  if (dim == 1) poly = [](double) -> XPolynomial { return {0.0, 0.0, 0.0}; };
  return Symbol(dim, SymbolForm::Custom, [](const Vec&, const Vec&) { return cplx(0.0, 0.0); }, std::move(poly));
}

Symbol symbol_ou_type(double a, MatrixField phi, const LevyTriplet& driver) {
  if (!std::isfinite(a)) throw InputError("mean reversion must be finite");
  require_dim(driver, phi.cols(), "symbol_ou_type");
  const int d = phi.rows();
  auto eval = [a, phi, driver](const Vec& x, const Vec& xi) -> cplx {
    const Vec u = phi(x).transpose() * xi;
    return levy_exponent(driver, u) + cplx(0.0, a * x.dot(xi));
  };
  Symbol::PolyFn poly;
  if (d == 1 && phi.cols() == 1 && phi.affine_coefficients()) {
    const auto [c0, c1] = *phi.affine_coefficients();
    if (c1 == 0.0) {
      poly = [a, c0, driver](double xi) -> XPolynomial {
        return {levy_exponent(driver, c0 * xi), cplx(0.0, a * xi), 0.0};
      };
    } else if (!has_jumps(driver.jumps())) {
      const auto [lin, quad] = gaussian_coefficients(driver);
      poly = [a, c0, c1, lin, quad](double xi) -> XPolynomial {
        return {lin * (c0 * xi) + quad * (c0 * c0 * xi * xi),
                lin * (c1 * xi) + quad * (2.0 * c0 * c1 * xi * xi) + cplx(0.0, a * xi),
                quad * (c1 * c1 * xi * xi)};
      };
    }
  }
  auto notes = driver_notes(driver, phi, a != 0.0);
  return Symbol(d, SymbolForm::OuType, std::move(eval), std::move(poly), std::move(notes));
}

Symbol symbol_additive(double b, MatrixField phi, const LevyTriplet& driver_l, const LevyTriplet& driver_z) {
  if (!std::isfinite(b)) throw InputError("additive coefficient b must be finite");
  require_dim(driver_l, phi.cols(), "symbol_additive (L)");
  require_dim(driver_z, phi.rows(), "symbol_additive (Z)");
  const int d = phi.rows();
  auto eval = [b, phi, driver_l, driver_z](const Vec& x, const Vec& xi) -> cplx {
    const Vec u = phi(x).transpose() * xi;
    return levy_exponent(driver_l, u) + levy_exponent(driver_z, Vec(b * xi));
  };
  Symbol::PolyFn poly;
  if (d == 1 && phi.cols() == 1 && phi.affine_coefficients()) {
    const auto [c0, c1] = *phi.affine_coefficients();
    if (c1 == 0.0) {
      poly = [b, c0, driver_l, driver_z](double xi) -> XPolynomial {
        return {levy_exponent(driver_l, c0 * xi) + levy_exponent(driver_z, b * xi), 0.0, 0.0};
      };
    } else if (!has_jumps(driver_l.jumps())) {
      const auto [lin, quad] = gaussian_coefficients(driver_l);
      poly = [b, c0, c1, lin, quad, driver_z](double xi) -> XPolynomial {
        return {lin * (c0 * xi) + quad * (c0 * c0 * xi * xi) + levy_exponent(driver_z, b * xi),
                lin * (c1 * xi) + quad * (2.0 * c0 * c1 * xi * xi), quad * (c1 * c1 * xi * xi)};
      };
    }
  }
  auto notes = driver_notes(driver_l, phi, false);
  return Symbol(d, SymbolForm::Additive, std::move(eval), std::move(poly), std::move(notes));
}

Symbol symbol_diffusion(double a, MatrixField phi, Convention convention) {
  if (!std::isfinite(a)) throw InputError("mean reversion must be finite");
  const int d = phi.rows();
  const double k = convention == Convention::Canonical ? 0.5 : 1.0;
  auto eval = [a, k, phi](const Vec& x, const Vec& xi) -> cplx {
    const Vec u = phi(x).transpose() * xi;
    return cplx(k * u.squaredNorm(), a * x.dot(xi));
  };
  Symbol::PolyFn poly;
  if (d == 1 && phi.cols() == 1 && phi.affine_coefficients()) {
    const auto [c0, c1] = *phi.affine_coefficients();
    poly = [a, k, c0, c1](double xi) -> XPolynomial {
      const double q = k * xi * xi;
      return {cplx(q * c0 * c0, 0.0), cplx(q * 2.0 * c0 * c1, a * xi), cplx(q * c1 * c1, 0.0)};
    };
  }
  std::vector<std::string> notes{
      "Phi is assumed continuously differentiable with bounded derivative (not verified)."};
  if (convention == Convention::Doubled) {
    notes.emplace_back("doubled convention: Gaussian part |Phi(x)'xi|^2 without the factor 1/2.");
  }
  return Symbol(d, SymbolForm::Diffusion, std::move(eval), std::move(poly), std::move(notes));
}

Symbol symbol_gou(const LevyTriplet& driver_u, const LevyTriplet& driver_l) {
  if (driver_u.dimension() != 1 || driver_l.dimension() != 1) {
    throw InputError("symbol_gou: generalized Ornstein-Uhlenbeck symbols are one-dimensional only");
  }
  auto eval = [driver_u, driver_l](const Vec& x, const Vec& xi) -> cplx {
    return levy_exponent(driver_u, x(0) * xi(0)) + levy_exponent(driver_l, xi(0));
  };
  Symbol::PolyFn poly;
  if (!has_jumps(driver_u.jumps())) {
    const auto [lin, quad] = gaussian_coefficients(driver_u);
    poly = [lin, quad, driver_l](double xi) -> XPolynomial {
      return {levy_exponent(driver_l, xi), lin * xi, quad * (xi * xi)};
    };
  }
  std::vector<std::string> notes{"the criterion requires a candidate law with finite second moment."};
  return Symbol(1, SymbolForm::Gou, std::move(eval), std::move(poly), std::move(notes));
}

Symbol symbol_stable_noise(double a1, double a2, double alpha, std::function<Vec(const Vec&)> beta, int dim) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(a1 + a2 > 0.0)) {
    throw InputError("stable-noise symbol needs a1, a2 >= 0 and a1 + a2 > 0");
  }
  if (!beta) throw InputError("stable-noise symbol needs a drift beta");
  const double c_alpha = stable_constant(alpha, dim);
  DifferentialCharacteristics chars;
  chars.dim = dim;
  chars.ell = std::move(beta);
  chars.q = [a1, dim](const Vec&) { return Mat(2.0 * a1 * Mat::Identity(dim, dim)); };
  if (a2 > 0.0) {
    const StableJumps jumps(alpha, -a2 * c_alpha, dim);
    chars.jumps = [jumps](const Vec&) -> JumpMeasure { return jumps; };
  }
  return symbol_from_characteristics(std::move(chars));
}

Symbol symbol_custom(int dim, Symbol::EvalFn eval, std::vector<std::string> notes) {
  return Symbol(dim, SymbolForm::Custom, std::move(eval), {}, std::move(notes));
}

}  // namespace symcrit

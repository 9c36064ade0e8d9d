#include "symcrit/cli/spec_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "symcrit/cli/expression.hpp"

namespace symcrit::cli {

namespace {

using expr::Expression;
using toml::Position;
using toml::Table;
using toml::Value;

/// Typed access to one TOML table; remembers which keys were read so that
/// finish() can reject the rest.
class Section {
 public:
  Section(const Table* t, std::string name) : t_(t), name_(std::move(name)) {}

  bool present() const { return t_ != nullptr; }
  const std::string& name() const { return name_; }
  Position position() const { return t_ ? t_->position : Position{1, 1}; }

  const Value* raw(const std::string& key) {
    used_.insert(key);
    return t_ ? t_->find(key) : nullptr;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("[" + name_ + "] " + msg, position()); }
  [[noreturn]] static void fail_at(const Value& v, const std::string& msg) { throw ParseError(msg, v.position); }

  const Value& required(const std::string& key) {
    const Value* v = raw(key);
    if (!v) fail("missing required key '" + key + "'");
    return *v;
  }

  std::optional<double> number_opt(const std::string& key) {
    const Value* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail_at(*v, "'" + key + "' must be a number, not a " + v->type_name());
    const double d = v->as_number();
    if (!std::isfinite(d)) fail_at(*v, "'" + key + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return number_opt(key).value_or(fallback); }
  double required_number(const std::string& key) {
    required(key);
    return *number_opt(key);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min, std::int64_t max) {
    const Value* v = raw(key);
    if (!v) return fallback;
    if (!v->is_integer()) fail_at(*v, "'" + key + "' must be an integer");
    const auto i = std::get<std::int64_t>(v->data);
    if (i < min || i > max) {
      fail_at(*v, "'" + key + "' must lie in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
    }
    return i;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Value* v = raw(key);
    if (!v) return fallback;
    if (!v->is_bool()) fail_at(*v, "'" + key + "' must be true or false");
    return std::get<bool>(v->data);
  }

  std::optional<std::string> string_opt(const std::string& key) {
    const Value* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail_at(*v, "'" + key + "' must be a string");
    return v->as_string();
  }

  std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed) {
    const Value* v = raw(key);
    if (!v) return fallback;
    if (!v->is_string()) fail_at(*v, "'" + key + "' must be a string");
    for (const auto& a : allowed) {
      if (a == v->as_string()) return a;
    }
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + ("\"" + a + "\"");
    fail_at(*v, "'" + key + "' must be one of " + list);
  }

  /// A number or an array of numbers.
  std::optional<std::vector<double>> numbers_opt(const std::string& key) {
    const Value* v = raw(key);
    if (!v) return std::nullopt;
    return numbers_of(*v, key);
  }

  static std::vector<double> numbers_of(const Value& v, const std::string& key) {
    if (v.is_number()) return {finite(v, key)};
    if (!v.is_array()) fail_at(v, "'" + key + "' must be a number or an array of numbers");
    std::vector<double> out;
    for (const auto& e : v.as_array()) {
      if (!e.is_number()) fail_at(e, "'" + key + "' must contain only numbers");
      out.push_back(finite(e, key));
    }
    if (out.empty()) fail_at(v, "'" + key + "' must not be empty");
    return out;
  }

  std::optional<std::pair<double, double>> interval_opt(const std::string& key) {
    const Value* v = raw(key);
    if (!v) return std::nullopt;
    const auto xs = numbers_of(*v, key);
    if (!v->is_array() || xs.size() != 2) fail_at(*v, "'" + key + "' must be a two-element array [lo, hi]");
    if (!(xs[0] <= xs[1])) fail_at(*v, "'" + key + "' needs lo <= hi");
    return std::pair{xs[0], xs[1]};
  }

  std::optional<Expression> expression_opt(const std::string& key) {
    const Value* v = raw(key);
    if (!v) return std::nullopt;
    if (v->is_number()) return Expression::constant(finite(*v, key));
    if (!v->is_string()) fail_at(*v, "'" + key + "' must be an expression string or a number");
    try {
      return Expression::parse(v->as_string());
    } catch (const expr::ExpressionError& e) {
      // The string starts one column after its opening quote.
      Position p = v->position;
      p.column += static_cast<int>(e.column());
      throw ParseError("'" + key + "': " + e.what(), p);
    }
  }
  Expression expression(const std::string& key, const std::string& fallback) {
    if (auto e = expression_opt(key)) return *e;
    return Expression::parse(fallback);
  }

  Section sub(const std::string& key) {
    const Value* v = raw(key);
    const std::string child = name_.empty() ? key : name_ + "." + key;
    if (!v) return Section(nullptr, child);
    if (!v->is_table()) fail_at(*v, "'" + key + "' must be a table");
    return Section(&v->as_table(), child);
  }

  void finish() const {
    if (!t_) return;
    for (std::size_t i = 0; i < t_->keys.size(); ++i) {
      if (!used_.count(t_->keys[i])) {
        throw ParseError("unknown key '" + t_->keys[i] + "' in [" + name_ + "]", t_->key_positions[i]);
      }
    }
  }

 private:
  static double finite(const Value& v, const std::string& key) {
    const double d = v.as_number();
    if (!std::isfinite(d)) fail_at(v, "'" + key + "' must be finite");
    return d;
  }

  const Table* t_;
  std::string name_;
  std::set<std::string> used_;
};

MatrixField field_from(const Expression& e) {
  if (auto q = e.quadratic(); q && (*q)[2] == 0.0) return MatrixField::affine((*q)[0], (*q)[1]);
  return MatrixField::scalar([e](double x) { return e(x); });
}

struct DriverDef {
  Vec ell;
  Mat q;
  JumpMeasure jumps;
  bool gaussian_only = true;

  LevyTriplet make(Convention c) const { return LevyTriplet(ell, c == Convention::Doubled ? Mat(2.0 * q) : q, jumps); }
  int dim() const { return static_cast<int>(ell.size()); }
};

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

DriverDef parse_driver(Section s) {
  if (!s.present()) s.fail("driver table is required");
  const auto ell_v = s.numbers_opt("ell");
  const Value* q_raw = s.raw("q");
  const auto explicit_dim = s.integer("dim", 0, 1, 64);

  std::optional<Mat> q;
  if (q_raw) {
    if (q_raw->is_number()) {
      q = Mat::Constant(1, 1, q_raw->as_number());
    } else if (q_raw->is_array()) {
      const auto& rows = q_raw->as_array();
      const auto n = static_cast<Eigen::Index>(rows.size());
      q = Mat(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = Section::numbers_of(rows[r], "q");
        if (!rows[r].is_array() || static_cast<Eigen::Index>(row.size()) != n) {
          Section::fail_at(rows[r], "'q' must be a number or a square array of rows");
        }
        for (Eigen::Index c = 0; c < n; ++c) q->coeffRef(r, c) = row[c];
      }
    } else {
      Section::fail_at(*q_raw, "'q' must be a number or a square array of rows");
    }
  }

  DriverDef d;
  int count = 0;
  const Value* atoms_raw = s.raw("atoms");
  const Value* stable_raw = s.raw("stable");
  const Value* annulus_raw = s.raw("annulus");
  count = (atoms_raw != nullptr) + (stable_raw != nullptr) + (annulus_raw != nullptr);
  if (count > 1) s.fail("at most one of 'atoms', 'stable' and 'annulus' may be given");

  int dim = explicit_dim > 0 ? static_cast<int>(explicit_dim) : 0;
  auto settle_dim = [&](int n, const Value& where) {
    if (dim == 0) dim = n;
    if (dim != n) Section::fail_at(where, "driver dimensions are inconsistent");
  };
  if (ell_v && ell_v->size() > 1) settle_dim(static_cast<int>(ell_v->size()), *s.raw("ell"));
  if (q && q->rows() > 1) settle_dim(static_cast<int>(q->rows()), *q_raw);

  try {
    if (atoms_raw) {
      if (!atoms_raw->is_array() || atoms_raw->as_array().empty()) {
        Section::fail_at(*atoms_raw, "'atoms' must be a nonempty array of {at, mass} tables");
      }
      std::vector<Atom> atoms;
      for (const auto& a : atoms_raw->as_array()) {
        if (!a.is_table()) Section::fail_at(a, "each atom must be an inline table {at = ..., mass = ...}");
        Section as(&a.as_table(), s.name() + ".atoms");
        const auto at = as.numbers_opt("at");
        if (!at) Section::fail_at(a, "atom is missing 'at'");
        const double mass = as.required_number("mass");
        as.finish();
        settle_dim(static_cast<int>(at->size()), a);
        atoms.push_back({to_vec(*at), mass});
      }
      d.jumps = AtomicJumps(std::move(atoms));
    } else if (stable_raw) {
      if (!stable_raw->is_table()) Section::fail_at(*stable_raw, "'stable' must be a table {alpha, scale}");
      Section st(&stable_raw->as_table(), s.name() + ".stable");
      const double alpha = st.required_number("alpha");
      const double scale = st.number("scale", 1.0);
      st.finish();
      if (dim == 0) dim = 1;
      d.jumps = StableJumps(alpha, scale, dim);
    } else if (annulus_raw) {
      if (!annulus_raw->is_table()) Section::fail_at(*annulus_raw, "'annulus' must be a table");
      Section an(&annulus_raw->as_table(), s.name() + ".annulus");
      const auto density = an.expression_opt("density");
      if (!density) an.fail("missing required key 'density'");
      const double inner = an.required_number("inner");
      const double outer = an.required_number("outer");
      const double var = an.number("small_jump_variance", 0.0);
      an.finish();
      settle_dim(1, *annulus_raw);
      const Expression e = *density;
      d.jumps = AnnulusJumps([e](double y) { return e(y); }, inner, outer, var);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    s.fail(e.what());
  }
  s.finish();

  if (dim == 0) dim = 1;
  d.ell = ell_v ? (ell_v->size() == 1 ? Vec::Constant(dim, (*ell_v)[0]) : to_vec(*ell_v)) : Vec::Zero(dim);
  if (q && q->rows() == 1 && dim > 1) q = Mat(q->coeff(0, 0) * Mat::Identity(dim, dim));
  d.q = q ? *q : Mat::Zero(dim, dim);
  if (d.ell.size() != dim || d.q.rows() != dim) s.fail("driver dimensions are inconsistent");
  d.gaussian_only = !has_jumps(d.jumps);
  try {
    d.make(Convention::Canonical);
  } catch (const InputError& e) {
    s.fail(e.what());
  }
  return d;
}

void require_one_dimensional(const DriverDef& d, Section& s, const char* what) {
  if (d.dim() != 1) s.fail(std::string(what) + " must be one-dimensional for this process kind");
}

void build_process(SpecFile& spec, Section p) {
  if (!p.present()) throw ParseError("missing [process] table", {1, 1});
  spec.kind = p.choice("kind", "", {"levy", "ou", "sde", "additive", "diffusion1d", "gou", "characteristics"});
  if (spec.kind.empty()) p.fail("missing required key 'kind'");
  const Convention conv = spec.convention;
  const double k = conv == Convention::Doubled ? 2.0 : 1.0;

  try {
    if (spec.kind == "ou") {
      const double lambda = p.required_number("lambda");
      const double sigma = p.number("sigma", 1.0);
      p.finish();
      spec.symbol = symbol_diffusion(lambda, MatrixField::constant(sigma), conv);
      spec.sde = SDESpec::ornstein_uhlenbeck(lambda, sigma);
      spec.diffusion = Diffusion1D{[lambda](double x) { return -lambda * x; },
                                   [sigma](double) { return std::abs(sigma); }};
    } else if (spec.kind == "levy") {
      const auto d = parse_driver(p.sub("driver"));
      p.finish();
      spec.dim = d.dim();
      spec.symbol = symbol_levy(d.make(conv));
      SDESpec sde;
      sde.dim = d.dim();
      sde.phi = MatrixField::constant(Mat::Identity(d.dim(), d.dim()));
      sde.driver = d.make(Convention::Canonical);
      spec.sde = sde;
    } else if (spec.kind == "sde") {
      const double a = p.number("a", 0.0);
      const auto phi = p.expression("phi", "1");
      auto drv = p.sub("driver");
      const auto d = drv.present() ? parse_driver(std::move(drv)) : DriverDef{Vec::Zero(1), Mat::Identity(1, 1), NoJumps{}, true};
      p.finish();
      require_one_dimensional(d, p, "driver");
      spec.symbol = symbol_ou_type(a, field_from(phi), d.make(conv));
      SDESpec sde;
      sde.mean_reversion = a;
      sde.phi = field_from(phi);
      sde.driver = d.make(Convention::Canonical);
      spec.sde = sde;
      if (d.gaussian_only) {
        const double ell = d.ell(0), vol = std::sqrt(d.q(0, 0));
        spec.diffusion = Diffusion1D{[a, phi, ell](double x) { return -a * x + phi(x) * ell; },
                                     [phi, vol](double x) { return std::abs(phi(x)) * vol; }};
      }
    } else if (spec.kind == "additive") {
      const double b = p.required_number("b");
      const auto phi = p.expression("phi", "1");
      auto drv = p.sub("driver");
      const auto l = drv.present() ? parse_driver(std::move(drv)) : DriverDef{Vec::Zero(1), Mat::Identity(1, 1), NoJumps{}, true};
      const auto z = parse_driver(p.sub("driver_z"));
      p.finish();
      require_one_dimensional(l, p, "driver");
      require_one_dimensional(z, p, "driver_z");
      spec.symbol = symbol_additive(b, field_from(phi), l.make(conv), z.make(conv));
      SDESpec sde;
      sde.phi = field_from(phi);
      sde.driver = l.make(Convention::Canonical);
      sde.additive_b = b;
      sde.additive_driver = z.make(Convention::Canonical);
      spec.sde = sde;
    } else if (spec.kind == "diffusion1d") {
      const auto b = p.expression("b_drift", "0");
      const auto sigma = p.expression("sigma", "1");
      const double x0 = p.number("x0", 0.0);
      const auto support = p.interval_opt("support");
      p.finish();
      Diffusion1D diff{[b](double x) { return b(x); }, [sigma](double x) { return sigma(x); }, x0};
      if (support) {
        diff.lo = support->first;
        diff.hi = support->second;
      }
      spec.diffusion = diff;
      DifferentialCharacteristics chars;
      chars.ell = [b](const Vec& x) { return vec1(b(x(0))); };
      chars.q = [sigma, k](const Vec& x) {
        const double s = sigma(x(0));
        return Mat::Constant(1, 1, k * s * s);
      };
      spec.symbol = symbol_from_characteristics(chars);
      SDESpec sde;
      sde.phi = MatrixField::scalar([sigma](double x) { return sigma(x); });
      sde.driver = LevyTriplet::brownian(1.0);
      sde.beta = [b](const Vec& x) { return vec1(b(x(0))); };
      spec.sde = sde;
    } else if (spec.kind == "gou") {
      const auto u = parse_driver(p.sub("driver_u"));
      const auto l = parse_driver(p.sub("driver"));
      p.finish();
      require_one_dimensional(u, p, "driver_u");
      require_one_dimensional(l, p, "driver");
      spec.symbol = symbol_gou(u.make(conv), l.make(conv));
    } else {
      const auto ell = p.expression("ell", "0");
      const auto q = p.expression("q", "0");
      p.finish();
      DifferentialCharacteristics chars;
      chars.ell = [ell](const Vec& x) { return vec1(ell(x(0))); };
      chars.q = [q, k](const Vec& x) { return Mat::Constant(1, 1, k * q(x(0))); };
      spec.symbol = symbol_from_characteristics(chars);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    p.fail(e.what());
  }
}

void build_measure(SpecFile& spec, Section m, const std::filesystem::path& base_dir) {
  if (!m.present()) return;
  const auto kind = m.choice("kind", "", {"gaussian", "density", "samples", "dirac"});
  if (kind.empty()) m.fail("missing required key 'kind'");
  try {
    if (kind == "gaussian") {
      const auto mean = m.numbers_opt("mean").value_or(std::vector<double>(spec.dim, 0.0));
      m.required("variance");
      const auto var = *m.numbers_opt("variance");
      if (mean.size() != var.size()) m.fail("'mean' and 'variance' must have the same length");
      spec.measure = Measure::gaussian(to_vec(mean), to_vec(var));
    } else if (kind == "density") {
      const auto rho = m.expression_opt("density");
      if (!rho) m.fail("missing required key 'density'");
      const auto support = m.interval_opt("support");
      if (!support) m.fail("missing required key 'support'");
      const bool normalize = m.boolean("normalize", true);
      const Expression e = *rho;
      spec.measure = Measure::density([e](double x) { return e(x); }, support->first, support->second,
                                      normalize ? Measure::Normalization::Normalize
                                                : Measure::Normalization::Check);
    } else if (kind == "samples") {
      const auto file = m.string_opt("file");
      if (!file) m.fail("missing required key 'file'");
      std::filesystem::path path(*file);
      if (path.is_relative()) path = base_dir / path;
      spec.measure = load_samples_csv(path);
    } else {
      const auto at = m.numbers_opt("mean").value_or(std::vector<double>(spec.dim, 0.0));
      spec.measure = Measure::dirac(to_vec(at));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    m.fail(e.what());
  }
  m.finish();
  if (spec.measure->dimension() != spec.dim) {
    m.fail("measure dimension " + std::to_string(spec.measure->dimension()) + " does not match process dimension " +
           std::to_string(spec.dim));
  }
}

void read_settings(SpecFile& spec, Section grid, Section quad, Section check, Section sim, Section fit,
                   Section stat) {
  spec.grid.xi_min = grid.number("xi_min", spec.grid.xi_min);
  spec.grid.xi_max = grid.number("xi_max", spec.grid.xi_max);
  spec.grid.n = static_cast<int>(grid.integer("n", spec.grid.n, 1, 1000000));
  grid.finish();
  if (spec.grid.xi_min > spec.grid.xi_max || (spec.grid.n > 1 && spec.grid.xi_min == spec.grid.xi_max)) {
    grid.fail("need xi_min < xi_max");
  }
  if (spec.dim > 1 && std::pow(static_cast<double>(spec.grid.n), spec.dim) > 1e6) grid.fail("grid is too large");

  spec.transform.rel_tol = quad.number("rel_tol", spec.transform.rel_tol);
  spec.transform.abs_tol = quad.number("abs_tol", spec.transform.abs_tol);
  spec.transform.panel_scale = quad.number("panel_scale", spec.transform.panel_scale);
  spec.transform.max_intervals = static_cast<int>(quad.integer("max_intervals", spec.transform.max_intervals, 1, 10000000));
  quad.finish();
  if (!(spec.transform.rel_tol > 0.0) || !(spec.transform.abs_tol >= 0.0) || !(spec.transform.panel_scale > 0.0)) {
    quad.fail("tolerances must be nonnegative (rel_tol and panel_scale positive)");
  }

  spec.tolerance = check.number("tolerance", spec.tolerance);
  check.finish();
  if (!(spec.tolerance > 0.0)) check.fail("'tolerance' must be positive");

  auto& s = spec.simulate;
  s.t = sim.number("t", s.t);
  s.dt = sim.number_opt("dt");
  s.n_paths = sim.integer("n_paths", s.n_paths, 100, 1000000000);
  s.burn_in = sim.number("burn_in", s.burn_in);
  s.n_samples = sim.integer("n_samples", s.n_samples, 1, 1000000000);
  s.sample_gap = sim.number("sample_gap", s.sample_gap);
  s.chains = static_cast<int>(sim.integer("chains", s.chains, 1, 4096));
  s.t_end = sim.number("t_end", s.t_end);
  s.seed = static_cast<std::uint64_t>(sim.integer("seed", static_cast<std::int64_t>(s.seed), 0, INT64_MAX));
  s.x0 = sim.numbers_opt("x0").value_or(std::vector<double>(spec.dim, 0.0));
  s.x = sim.numbers_opt("x");
  if (auto xi = sim.numbers_opt("xi")) s.xi = *xi;
  s.output = sim.choice("output", s.output, {"path", "samples"});
  sim.finish();
  if (!(s.t > 0.0) || !(s.burn_in > 0.0) || !(s.sample_gap > 0.0) || !(s.t_end > 0.0) || (s.dt && !(*s.dt > 0.0))) {
    sim.fail("t, dt, burn_in, sample_gap and t_end must be positive");
  }
  if (static_cast<int>(s.x0.size()) != spec.dim || (s.x && static_cast<int>(s.x->size()) != spec.dim)) {
    sim.fail("'x0' and 'x' must have the process dimension");
  }
  if (spec.dim > 1 && s.xi.size() % spec.dim != 0) sim.fail("'xi' must list whole frequency vectors");

  auto& f = spec.fit;
  if (auto m = fit.interval_opt("mean")) std::tie(f.mean_lo, f.mean_hi) = *m;
  if (auto v = fit.interval_opt("variance")) std::tie(f.var_lo, f.var_hi) = *v;
  f.objective = fit.choice("objective", "sup_abs", {"sup_abs", "l2"}) == "l2" ? Objective::L2 : Objective::SupAbs;
  f.options.max_iter = static_cast<int>(fit.integer("max_iter", f.options.max_iter, 1, 1000000));
  f.options.tol = fit.number("tol", f.options.tol);
  f.options.restarts = static_cast<int>(fit.integer("restarts", f.options.restarts, 0, 1000));
  f.options.seed = static_cast<std::uint64_t>(fit.integer("seed", static_cast<std::int64_t>(f.options.seed), 0, INT64_MAX));
  fit.finish();
  if (!(f.var_lo > 0.0)) fit.fail("variance bounds must be positive");
  if (!(f.options.tol >= 0.0)) fit.fail("'tol' must be nonnegative");

  spec.stationary.x_min = stat.number_opt("x_min");
  spec.stationary.x_max = stat.number_opt("x_max");
  spec.stationary.n = static_cast<int>(stat.integer("n", spec.stationary.n, 2, 10000000));
  stat.finish();
  if (spec.stationary.x_min && spec.stationary.x_max && !(*spec.stationary.x_min < *spec.stationary.x_max)) {
    stat.fail("need x_min < x_max");
  }
}

}  // namespace

std::vector<Vec> SpecFile::xi_grid() const {
  const auto axis = linspace(grid.xi_min, grid.xi_max, static_cast<std::size_t>(grid.n));
  std::vector<Vec> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Vec xi(dim);
    for (int j = 0; j < dim; ++j) xi(j) = axis[idx[j]];
    out.push_back(xi);
    int j = dim - 1;
    while (j >= 0 && ++idx[j] == axis.size()) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

SpecFile parse_spec(std::string_view text, const std::filesystem::path& base_dir) {
  SpecFile spec;
  spec.document = toml::parse(text);
  Section root(&spec.document, "");
  for (std::size_t i = 0; i < spec.document.keys.size(); ++i) {
    if (!spec.document.values[i].is_table()) {
      throw ParseError("top-level key '" + spec.document.keys[i] + "' must be inside a table",
                       spec.document.key_positions[i]);
    }
  }
  Section mode = root.sub("mode");
  spec.convention = mode.choice("convention", "canonical", {"canonical", "doubled"}) == "doubled" ? Convention::Doubled
                                                                                             : Convention::Canonical;
  mode.finish();
  build_process(spec, root.sub("process"));
  build_measure(spec, root.sub("measure"), base_dir);
  read_settings(spec, root.sub("grid"), root.sub("quadrature"), root.sub("check"), root.sub("simulate"),
                root.sub("fit"), root.sub("stationary"));
  for (std::size_t i = 0; i < spec.document.keys.size(); ++i) {
    static const std::set<std::string> known{"mode",     "process", "measure", "grid",      "quadrature",
                                             "check",    "simulate", "fit",    "stationary"};
    if (!known.count(spec.document.keys[i])) {
      throw ParseError("unknown table [" + spec.document.keys[i] + "]", spec.document.key_positions[i]);
    }
  }
  return spec;
}

SpecFile load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open spec file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto spec = parse_spec(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
  spec.path = path;
  return spec;
}

std::string normalized_spec(const SpecFile& spec) { return toml::dump(spec.document); }

}  // namespace symcrit::cli

#include "symcrit/cli/runner.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "symcrit/cli/spec_file.hpp"
#include "symcrit/parallel.hpp"

namespace symcrit::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Writes dir/name through a temporary file and a rename.
void write_atomic(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path target = dir / name;
  const fs::path tmp = dir / ("." + name + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string xi_header(int dim) {
  if (dim == 1) return "xi";
  std::string h;
  for (int j = 1; j <= dim; ++j) h += (j > 1 ? ",xi_" : "xi_") + std::to_string(j);
  return h;
}

std::string vec_cells(const Vec& v) {
  std::string s;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += (j ? "," : "") + num(v(j));
  return s;
}

std::string vec_text(const Vec& v) {
  if (v.size() == 1) return num(v(0));
  std::string s = "(";
  for (Eigen::Index j = 0; j < v.size(); ++j) s += (j ? ", " : "") + num(v(j));
  return s + ")";
}

void print_banner(const SpecFile& spec, std::ostream& out) {
  if (spec.convention == Convention::Canonical) {
    out << "convention: canonical (Gaussian part enters the symbol as xi'Q xi / 2)\n";
  } else {
    out << "convention: doubled (Gaussian part enters the symbol as xi'Q xi, without the factor 1/2)\n";
  }
}

void print_notes(const std::vector<std::string>& notes, std::ostream& out) {
  out << "hypothesis notes:\n";
  if (notes.empty()) out << "  (none)\n";
  for (const auto& n : notes) out << "  - " << n << "\n";
}

std::vector<std::string> symbol_notes(const SpecFile& spec) {
  return spec.symbol ? spec.symbol->hypothesis_notes() : std::vector<std::string>{};
}

const Symbol& need_symbol(const SpecFile& spec) {
  if (!spec.symbol) throw InputError("process kind '" + spec.kind + "' has no symbol");
  return *spec.symbol;
}

const Measure& need_measure(const SpecFile& spec, const char* command) {
  if (!spec.measure) throw InputError(std::string(command) + " needs a [measure] table");
  return *spec.measure;
}

const SDESpec& need_sde(const SpecFile& spec, const char* command) {
  if (!spec.sde) throw InputError(std::string(command) + " is not available for process kind '" + spec.kind + "'");
  return *spec.sde;
}

int cmd_check(const SpecFile& spec, const fs::path& out_dir, std::ostream& out) {
  const Symbol& sym = need_symbol(spec);
  const Measure& mu = need_measure(spec, "check");
  CriterionOptions opts;
  opts.tolerance = spec.tolerance;
  opts.transform = spec.transform;
  const auto report = residual_profile(sym, mu, spec.xi_grid(), opts);

  std::ostringstream csv;
  csv << xi_header(spec.dim) << ",re_S,im_S,abs_S,err_est\n";
  std::size_t failed = 0;
  Vec argmax = report.points.front().xi;
  double best = -1.0;
  for (const auto& p : report.points) {
    if (p.failed) {
      ++failed;
      csv << vec_cells(p.xi) << ",nan,nan,nan,nan\n";
      continue;
    }
    const double a = std::abs(p.residual.value);
    if (a > best) {
      best = a;
      argmax = p.xi;
    }
    csv << vec_cells(p.xi) << "," << num(p.residual.value.real()) << "," << num(p.residual.value.imag()) << ","
        << num(a) << "," << num(p.residual.error_estimate) << "\n";
  }
  write_atomic(out_dir, "report.csv", csv.str());

  out << "verdict: " << to_string(report.verdict) << "\n";
  out << "max |S| = " << num(report.max_abs) << " at xi = " << vec_text(argmax) << "\n";
  out << "L2 norm = " << num(report.l2_norm) << "\n";
  out << "tolerance = " << num(report.tolerance_used) << " (+ 3 x error estimate per point)\n";
  out << "grid points = " << report.points.size() << ", failed = " << failed << "\n";
  for (const auto& p : report.points) {
    if (p.failed) out << "  failed at xi = " << vec_text(p.xi) << ": " << p.failure << "\n";
  }
  print_notes(report.hypothesis_notes, out);
  out << "wrote " << (out_dir / "report.csv").string() << "\n";
  switch (report.verdict) {
    case Verdict::ConsistentWithInvariance: return kConsistent;
    case Verdict::Violated: return kViolated;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int cmd_fit(const SpecFile& spec, const fs::path& out_dir, std::ostream& out) {
  const Symbol& sym = need_symbol(spec);
  if (spec.dim != 1) throw InputError("fit supports one-dimensional processes only");
  const auto& f = spec.fit;
  FitProblem problem{sym, MeasureFamily::gaussian(f.mean_lo, f.mean_hi, f.var_lo, f.var_hi),
                     linspace(spec.grid.xi_min, spec.grid.xi_max, static_cast<std::size_t>(spec.grid.n)),
                     f.objective, {}, spec.transform};
  const auto result = fit_invariant(problem, f.options);

  std::ostringstream csv;
  csv << "parameter,value\n";
  csv << "mean," << num(result.params(0)) << "\n";
  csv << "variance," << num(result.params(1)) << "\n";
  csv << "objective_value," << num(result.objective_value) << "\n";
  csv << "iterations," << result.iterations << "\n";
  csv << "converged," << (result.converged ? "true" : "false") << "\n";
  write_atomic(out_dir, "fit.csv", csv.str());

  out << "family: Gaussian(mean in [" << num(f.mean_lo) << ", " << num(f.mean_hi) << "], variance in ["
      << num(f.var_lo) << ", " << num(f.var_hi) << "])\n";
  out << "objective: " << to_string(f.objective) << " of |S(xi)| over " << problem.grid.size() << " points\n";
  out << "best mean = " << num(result.params(0)) << ", variance = " << num(result.params(1)) << "\n";
  out << "objective value = " << num(result.objective_value) << ", iterations = " << result.iterations << "\n";
  out << "converged: " << (result.converged ? "yes" : "no") << " (tol " << num(f.options.tol) << ")\n";
  auto notes = symbol_notes(spec);
  notes.emplace_back(result.converged
                         ? "a residual-zero member of the family is infinitesimally invariant (criterion satisfied); "
                           "uniqueness of the invariant law is not implied."
                         : "no member of the family satisfies the criterion within tolerance: no invariant law in "
                           "this family.");
  print_notes(notes, out);
  out << "wrote " << (out_dir / "fit.csv").string() << "\n";
  return 0;
}

int cmd_estimate(const SpecFile& spec, const fs::path& out_dir, std::ostream& out) {
  const SDESpec& sde = need_sde(spec, "estimate-symbol");
  const auto& s = spec.simulate;
  const Vec x = Eigen::Map<const Vec>((s.x ? *s.x : s.x0).data(), spec.dim);
  std::ostringstream csv;
  csv << xi_header(spec.dim) << ",re_est,im_est,std_error,re_p,im_p\n";
  out << "estimating -(E exp(i (X_t - x)'xi) - 1) / t at x = " << vec_text(x) << ", t = " << num(s.t)
      << ", paths = " << s.n_paths << ", seed = " << s.seed << "\n";
  for (std::size_t k = 0; k + spec.dim <= s.xi.size(); k += spec.dim) {
    const Vec xi = Eigen::Map<const Vec>(s.xi.data() + k, spec.dim);
    const auto est = estimate_symbol(sde, x, xi, s.t, s.n_paths, s.seed, s.dt);
    const cplx p = spec.symbol ? (*spec.symbol)(x, xi) : cplx(std::nan(""), std::nan(""));
    csv << vec_cells(xi) << "," << num(est.value.real()) << "," << num(est.value.imag()) << ","
        << num(est.std_error) << "," << num(p.real()) << "," << num(p.imag()) << "\n";
    out << "  xi = " << vec_text(xi) << ": estimate " << num(est.value.real()) << " + " << num(est.value.imag())
        << "i (std error " << num(est.std_error) << "), symbol " << num(p.real()) << " + " << num(p.imag())
        << "i\n";
  }
  write_atomic(out_dir, "symbol_estimate.csv", csv.str());
  auto notes = symbol_notes(spec);
  notes.emplace_back("the estimate carries an O(t) bias from the small-time limit in addition to Monte Carlo error.");
  if (spec.convention == Convention::Doubled) {
    notes.emplace_back("the simulated process does not depend on the convention; the reference symbol column does.");
  }
  print_notes(notes, out);
  out << "wrote " << (out_dir / "symbol_estimate.csv").string() << "\n";
  return 0;
}

int cmd_stationary(const SpecFile& spec, const fs::path& out_dir, std::ostream& out) {
  if (!spec.diffusion) {
    throw InputError("stationary-density needs a one-dimensional diffusion (kind ou, diffusion1d, or sde with a "
                     "Brownian driver)");
  }
  const StationaryDensity pi(*spec.diffusion);
  const double lo = spec.stationary.x_min.value_or(pi.support_lo());
  const double hi = spec.stationary.x_max.value_or(pi.support_hi());
  std::ostringstream csv;
  csv << "x,pi\n";
  for (double x : linspace(lo, hi, static_cast<std::size_t>(spec.stationary.n))) {
    csv << num(x) << "," << num(pi(x)) << "\n";
  }
  write_atomic(out_dir, "stationary_density.csv", csv.str());
  out << "M = " << num(pi.total_mass()) << " (error estimate " << num(pi.total_mass_error()) << ")\n";
  out << "truncated support = [" << num(pi.support_lo()) << ", " << num(pi.support_hi()) << "]\n";
  out << "integral of s diverges numerically: " << (pi.scale_integral_diverges() ? "yes" : "no") << "\n";
  std::vector<std::string> notes{
      "pi = m / M is the stationary density when the integral of s is infinite and M is finite; the divergence "
      "check is a numeric indicator, not a proof."};
  if (!pi.scale_integral_diverges()) {
    notes.emplace_back("the scale density did not diverge numerically: the recurrence hypothesis is unconfirmed.");
  }
  print_notes(notes, out);
  out << "wrote " << (out_dir / "stationary_density.csv").string() << "\n";
  return 0;
}

int cmd_simulate(const SpecFile& spec, const fs::path& out_dir, std::ostream& out) {
  const SDESpec& sde = need_sde(spec, "simulate");
  const auto& s = spec.simulate;
  const Vec x0 = Eigen::Map<const Vec>(s.x0.data(), spec.dim);
  const double dt = s.dt.value_or(0.01);
  std::ostringstream csv;
  std::string file;
  if (s.output == "path") {
    const auto path = simulate_path(sde, x0, s.t_end, dt, s.seed);
    csv << "t," << (spec.dim == 1 ? std::string("x") : [&] {
      std::string h;
      for (int j = 1; j <= spec.dim; ++j) h += (j > 1 ? ",x_" : "x_") + std::to_string(j);
      return h;
    }()) << "\n";
    for (const auto& p : path) csv << num(p.t) << "," << vec_cells(p.x) << "\n";
    file = "path.csv";
    out << "simulated " << path.size() - 1 << " steps of size " << num(dt) << " to t = " << num(s.t_end) << "\n";
  } else {
    EmpiricalLawOptions opts;
    opts.burn_in = s.burn_in;
    opts.n_samples = s.n_samples;
    opts.sample_gap = s.sample_gap;
    opts.dt = dt;
    opts.seed = s.seed;
    opts.chains = s.chains;
    const auto law = empirical_law(sde, x0, opts);
    for (const auto& p : std::get<Measure::Samples>(law.variant()).points) csv << vec_cells(p) << "\n";
    file = "samples.csv";
    out << "collected " << s.n_samples << " samples from " << s.chains << " chains\n";
  }
  write_atomic(out_dir, file, csv.str());
  auto notes = symbol_notes(spec);
  notes.emplace_back("Euler-Maruyama discretization: coefficients are frozen over each step.");
  print_notes(notes, out);
  out << "wrote " << (out_dir / file).string() << "\n";
  return 0;
}

std::optional<unsigned> threads_from_env() {
  const char* env = std::getenv("SYMCRIT_THREADS");
  if (!env || !*env) return std::nullopt;
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
  if (ec != std::errc() || *ptr != '\0') return std::nullopt;
  return v;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symcrit: invariant-measure criterion checks for Levy-type processes"};
  app.require_subcommand(1);
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
  std::optional<unsigned> threads;
  bool print_spec = false;
  std::string spec_path;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const SpecFile&, const fs::path&, std::ostream&);
  };
  const std::vector<Command> commands{
      {"check", "evaluate the criterion residual on the xi grid (exit 0/2/3)", cmd_check},
      {"fit", "fit a Gaussian family to the symbol", cmd_fit},
      {"estimate-symbol", "Monte Carlo estimate of the probabilistic symbol", cmd_estimate},
      {"stationary-density", "stationary density of a one-dimensional diffusion", cmd_stationary},
      {"simulate", "simulate a path or stationary samples", cmd_simulate},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("spec", spec_path, "TOML spec file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the random seed");
    sub->add_option("--threads", threads, "worker threads (default: SYMCRIT_THREADS or all cores)");
    sub->add_flag("--print-spec", print_spec, "print the normalized spec and exit");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kSpecError;
  }

  if (threads) {
    parallel::set_thread_count(*threads);
  } else if (auto env = threads_from_env()) {
    parallel::set_thread_count(*env);
  } else {
    parallel::set_thread_count(0);
  }

  std::optional<SpecFile> spec;
  try {
    spec = load_spec(spec_path);
  } catch (const toml::ParseError& e) {
    err << spec_path << ":" << e.what() << "\n";
    return kSpecError;
  } catch (const InputError& e) {
    err << spec_path << ": " << e.what() << "\n";
    return kSpecError;
  } catch (const Error& e) {
    err << spec_path << ": numeric failure while building the spec: " << e.what() << "\n";
    return kNumericError;
  }

  if (print_spec) {
    out << normalized_spec(*spec);
    return 0;
  }
  if (seed) {
    if (*seed < 0) {
      err << "--seed must be nonnegative\n";
      return kSpecError;
    }
    spec->simulate.seed = static_cast<std::uint64_t>(*seed);
    spec->fit.options.seed = static_cast<std::uint64_t>(*seed);
  }

  print_banner(*spec, out);
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return commands[i].fn(*spec, fs::path(out_dir), out);
    } catch (const InputError& e) {
      err << commands[i].name << ": " << e.what() << "\n";
      return kSpecError;
    } catch (const Error& e) {
      err << commands[i].name << ": numeric failure: " << e.what() << "\n";
      return kNumericError;
    } catch (const fs::filesystem_error& e) {
      err << commands[i].name << ": " << e.what() << "\n";
      return kNumericError;
    }
  }
  return kSpecError;
}

}  // namespace symcrit::cli

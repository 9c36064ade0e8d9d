#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "symcrit/cli/toml.hpp"
#include "symcrit/criterion.hpp"
#include "symcrit/diffusion.hpp"
#include "symcrit/fit.hpp"
#include "symcrit/simulate.hpp"
#include "symcrit/symbol.hpp"

namespace symcrit::cli {

using toml::ParseError;

struct GridSettings {
  double xi_min = -5.0;
  double xi_max = 5.0;
  int n = 101;
};

struct SimulateSettings {
  double t = 1e-3;
  std::optional<double> dt;
  std::int64_t n_paths = 10000;
  double burn_in = 10.0;
  std::int64_t n_samples = 10000;
  double sample_gap = 1.0;
  int chains = 8;
  double t_end = 10.0;
  std::uint64_t seed = 42;
  std::vector<double> x0;
  std::optional<std::vector<double>> x;  // evaluation point for estimate-symbol
  std::vector<double> xi{1.0};
  std::string output = "path";  // "path" or "samples"
};

struct FitSettings {
  double mean_lo = 0.0, mean_hi = 0.0;
  double var_lo = 0.01, var_hi = 10.0;
  Objective objective = Objective::SupAbs;
  FitOptions options;
};

struct StationarySettings {
  std::optional<double> x_min, x_max;
  int n = 201;
};

/// A validated spec file. Engine objects are built eagerly so that every
/// validation error surfaces before any command runs.
struct SpecFile {
  std::filesystem::path path;
  toml::Table document;
  Convention convention = Convention::Canonical;
  std::string kind;
  int dim = 1;

  std::optional<Symbol> symbol;
  std::optional<SDESpec> sde;             // kinds that can be simulated
  std::optional<Diffusion1D> diffusion;   // kinds with a one-dimensional diffusion form
  std::optional<Measure> measure;         // present when [measure] is given

  GridSettings grid;
  TransformOptions transform;
  double tolerance = 1e-6;
  SimulateSettings simulate;
  FitSettings fit;
  StationarySettings stationary;

  /// The xi grid: n points per axis on [xi_min, xi_max]^d.
  std::vector<Vec> xi_grid() const;
};

/// Throws ParseError (with line and column) for malformed or invalid specs.
SpecFile parse_spec(std::string_view text, const std::filesystem::path& base_dir = ".");
SpecFile load_spec(const std::filesystem::path& path);

/// Normalized TOML rendering of the spec document.
std::string normalized_spec(const SpecFile& spec);

}  // namespace symcrit::cli

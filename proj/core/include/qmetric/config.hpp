#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmetric/family.hpp"

namespace qmetric {

struct TomlTable;

// A declarative description of a metric sweep: which family, on what grid,
// with which derivative settings, over which parameter values and gauge
// factors, written where. Parsed from a TOML file; every violation is a
// ConfigError carrying the line and field.

enum class ModelType { landau, expr };

struct ModelConfig {
  ModelType type = ModelType::landau;

  // landau family
  int m = 0;

  // gauge factor used by operations that need a single g (e.g. convergence
  // studies); sweeps take their list from SweepConfig::g_values.
  double g = 0.0;

  // expr family
  std::string amplitude;
  std::string phase;                   // defaults to "0"
  std::string alpha;                   // unit gauge phase, scaled per g
  std::map<std::string, std::string> alpha_derivatives;  // alpha_d<name> keys
  std::map<std::string, std::string> gamma;              // gamma_<name> keys
  std::vector<std::string> parameters;
  bool normalize = true;

  // fixed values for parameters that are not swept ([params] section)
  std::map<std::string, double> fixed_values;
};

struct GridConfig {
  int n = 256;
  double n_sigma = 8.0;  // landau sizing: half width n_sigma / sqrt(B)
  // explicit bounds override the sizing rule and are mandatory for expr
  std::optional<double> x_min, x_max, y_min, y_max;

  bool has_bounds() const { return x_min.has_value(); }
};

enum class SweepSpacing { linear, log };

struct SweepConfig {
  std::string parameter = "B";
  double from = 0.0;
  double to = 0.0;
  int points = 1;
  SweepSpacing spacing = SweepSpacing::linear;
  std::vector<double> g_values;

  std::vector<double> values() const;  // the realized sweep grid
};

struct OutputConfig {
  std::string path = "sweep.csv";
  std::string format = "csv";
};

struct RunConfig {
  ModelConfig model;
  GridConfig grid;
  DerivativeScheme derivative;
  SweepConfig sweep;
  OutputConfig output;
};

// Strict mapping from a parsed table: unknown sections or keys are errors,
// so typos cannot silently fall back to defaults.
RunConfig run_config_from_table(const TomlTable& table);
RunConfig load_run_config(const std::string& path);

// Cross-field validation; called by the loaders, exposed for programmatic
// configs.
void validate(const RunConfig& config);

}  // namespace qmetric

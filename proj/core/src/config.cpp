#include "qmetric/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmetric/errors.hpp"
#include "qmetric/toml.hpp"

namespace qmetric {

namespace {

[[noreturn]] void bad(const std::string& what, const TomlValue* where = nullptr,
                      const std::string& field = {}) {
  if (where != nullptr)
    throw ConfigError(what + " (line " + std::to_string(where->line) + ")",
                      where->line, field);
  throw ConfigError(what, 0, field);
}

void check_known_keys(const TomlTable& table, const std::string& section,
                      const std::set<std::string>& known,
                      const std::vector<std::string>& prefixes = {}) {
  const TomlTable::Section* s = table.section(section);
  if (s == nullptr) return;
  for (const auto& [key, value] : *s) {
    if (known.count(key)) continue;
    const bool prefixed =
        std::any_of(prefixes.begin(), prefixes.end(), [&](const auto& p) {
          return key.size() > p.size() && key.compare(0, p.size(), p) == 0;
        });
    if (!prefixed)
      bad("unknown key '" + section + "." + key + "'", &value,
          section + "." + key);
  }
}

ModelConfig read_model(const TomlTable& table) {
  ModelConfig model;
  const TomlValue* type = table.find("model", "type");
  if (type == nullptr)
    throw ConfigError("missing required key 'model.type'", 0, "model.type");
  const std::string& name = type->as_string("model.type");
  if (name == "landau") {
    model.type = ModelType::landau;
  } else if (name == "expr") {
    model.type = ModelType::expr;
  } else {
    bad("model.type must be \"landau\" or \"expr\", got \"" + name + "\"",
        type, "model.type");
  }

  if (const TomlValue* v = table.find("model", "m"))
    model.m = v->as_int("model.m");
  if (const TomlValue* v = table.find("model", "g"))
    model.g = v->as_number("model.g");
  if (const TomlValue* v = table.find("model", "amplitude"))
    model.amplitude = v->as_string("model.amplitude");
  if (const TomlValue* v = table.find("model", "phase"))
    model.phase = v->as_string("model.phase");
  if (const TomlValue* v = table.find("model", "alpha"))
    model.alpha = v->as_string("model.alpha");
  if (const TomlValue* v = table.find("model", "normalize"))
    model.normalize = v->as_bool("model.normalize");
  if (const TomlValue* v = table.find("model", "parameters")) {
    for (const TomlValue& item : v->as_array("model.parameters"))
      model.parameters.push_back(item.as_string("model.parameters"));
  }

  if (const TomlTable::Section* s = table.section("model")) {
    for (const auto& [key, value] : *s) {
      if (key.rfind("alpha_d", 0) == 0 && key.size() > 7)
        model.alpha_derivatives[key.substr(7)] = value.as_string("model." + key);
      else if (key.rfind("gamma_", 0) == 0 && key.size() > 6)
        model.gamma[key.substr(6)] = value.as_string("model." + key);
    }
  }

  if (const TomlTable::Section* s = table.section("params"))
    for (const auto& [key, value] : *s)
      model.fixed_values[key] = value.as_number("params." + key);
  return model;
}

GridConfig read_grid(const TomlTable& table) {
  GridConfig grid;
  if (const TomlValue* v = table.find("grid", "n")) grid.n = v->as_int("grid.n");
  if (const TomlValue* v = table.find("grid", "n_sigma"))
    grid.n_sigma = v->as_number("grid.n_sigma");
  const TomlValue* x_min = table.find("grid", "x_min");
  const TomlValue* x_max = table.find("grid", "x_max");
  const TomlValue* y_min = table.find("grid", "y_min");
  const TomlValue* y_max = table.find("grid", "y_max");
  const int given = (x_min != nullptr) + (x_max != nullptr) +
                    (y_min != nullptr) + (y_max != nullptr);
  if (given != 0 && given != 4)
    bad("grid bounds must be given as all four of x_min, x_max, y_min, y_max",
        x_min != nullptr ? x_min : (x_max != nullptr ? x_max : y_min),
        "grid");
  if (given == 4) {
    grid.x_min = x_min->as_number("grid.x_min");
    grid.x_max = x_max->as_number("grid.x_max");
    grid.y_min = y_min->as_number("grid.y_min");
    grid.y_max = y_max->as_number("grid.y_max");
  }
  return grid;
}

DerivativeScheme read_derivative(const TomlTable& table) {
  DerivativeScheme scheme;
  if (const TomlValue* v = table.find("derivative", "h_rel"))
    scheme.h_rel = v->as_number("derivative.h_rel");
  if (const TomlValue* v = table.find("derivative", "richardson"))
    scheme.richardson = v->as_bool("derivative.richardson");
  return scheme;
}

SweepConfig read_sweep(const TomlTable& table) {
  SweepConfig sweep;
  if (table.section("sweep") == nullptr)
    throw ConfigError("missing required section [sweep]", 0, "sweep");
  if (const TomlValue* v = table.find("sweep", "parameter"))
    sweep.parameter = v->as_string("sweep.parameter");
  const TomlValue* from = table.find("sweep", "from");
  const TomlValue* to = table.find("sweep", "to");
  if (from == nullptr || to == nullptr)
    throw ConfigError("missing required keys 'sweep.from' and 'sweep.to'", 0,
                      "sweep");
  sweep.from = from->as_number("sweep.from");
  sweep.to = to->as_number("sweep.to");
  if (const TomlValue* v = table.find("sweep", "points"))
    sweep.points = v->as_int("sweep.points");
  if (const TomlValue* v = table.find("sweep", "spacing")) {
    const std::string& s = v->as_string("sweep.spacing");
    if (s == "linear") sweep.spacing = SweepSpacing::linear;
    else if (s == "log") sweep.spacing = SweepSpacing::log;
    else bad("sweep.spacing must be \"linear\" or \"log\"", v, "sweep.spacing");
  }
  if (const TomlValue* v = table.find("sweep", "g_values"))
    for (const TomlValue& item : v->as_array("sweep.g_values"))
      sweep.g_values.push_back(item.as_number("sweep.g_values"));
  if (sweep.g_values.empty()) sweep.g_values.push_back(0.0);
  return sweep;
}

OutputConfig read_output(const TomlTable& table) {
  OutputConfig output;
  if (const TomlValue* v = table.find("output", "path"))
    output.path = v->as_string("output.path");
  if (const TomlValue* v = table.find("output", "format"))
    output.format = v->as_string("output.format");
  return output;
}

}  // namespace

std::vector<double> SweepConfig::values() const {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(from);
    return out;
  }
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    if (spacing == SweepSpacing::linear)
      out.push_back(from + t * (to - from));
    else
      out.push_back(from * std::pow(to / from, t));
  }
  return out;
}

RunConfig run_config_from_table(const TomlTable& table) {
  for (const auto& [name, section] : table.sections) {
    static const std::set<std::string> known{"",      "model",  "params",
                                             "grid",  "derivative", "sweep",
                                             "output"};
    if (!known.count(name))
      throw ConfigError("unknown section [" + name + "] (line " +
                            std::to_string(table.section_lines.at(name)) + ")",
                        table.section_lines.at(name), name);
  }
  if (const TomlTable::Section* top = table.section(""); top && !top->empty())
    bad("top-level keys are not allowed; use a [section]",
        &top->begin()->second, top->begin()->first);

  check_known_keys(table, "model",
                   {"type", "m", "g", "amplitude", "phase", "alpha",
                    "normalize", "parameters"},
                   {"alpha_d", "gamma_"});
  check_known_keys(table, "grid",
                   {"n", "n_sigma", "x_min", "x_max", "y_min", "y_max"});
  check_known_keys(table, "derivative", {"h_rel", "richardson"});
  check_known_keys(table, "sweep",
                   {"parameter", "from", "to", "points", "spacing", "g_values"});
  check_known_keys(table, "output", {"path", "format"});

  RunConfig config;
  config.model = read_model(table);
  config.grid = read_grid(table);
  config.derivative = read_derivative(table);
  config.sweep = read_sweep(table);
  config.output = read_output(table);
  validate(config);
  return config;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_table(load_toml_file(path));
}

void validate(const RunConfig& config) {
  const ModelConfig& model = config.model;
  const bool landau = model.type == ModelType::landau;

  if (model.m < 0) bad("model.m must be non-negative", nullptr, "model.m");
  if (!std::isfinite(model.g)) bad("model.g must be finite", nullptr, "model.g");

  if (landau) {
    if (!model.amplitude.empty() || !model.phase.empty() ||
        !model.alpha.empty() || !model.parameters.empty() ||
        !model.alpha_derivatives.empty() || !model.gamma.empty())
      bad("amplitude/phase/alpha/gamma/parameters apply only to expr models",
          nullptr, "model");
    if (config.sweep.parameter != "B")
      bad("landau sweeps vary 'B'; got sweep.parameter = '" +
              config.sweep.parameter + "'",
          nullptr, "sweep.parameter");
  } else {
    if (model.amplitude.empty())
      bad("expr models need model.amplitude", nullptr, "model.amplitude");
    if (model.parameters.empty())
      bad("expr models need model.parameters", nullptr, "model.parameters");
    for (const std::string& p : model.parameters)
      if (p.empty()) bad("empty entry in model.parameters", nullptr,
                         "model.parameters");
    if (std::find(model.parameters.begin(), model.parameters.end(),
                  config.sweep.parameter) == model.parameters.end())
      bad("sweep.parameter '" + config.sweep.parameter +
              "' is not declared in model.parameters",
          nullptr, "sweep.parameter");
    for (const std::string& p : model.parameters)
      if (p != config.sweep.parameter && !model.fixed_values.count(p))
        bad("parameter '" + p +
                "' is neither swept nor given a value in [params]",
            nullptr, "params." + p);
    for (const auto& [name, text] : model.alpha_derivatives) {
      if (model.alpha.empty())
        bad("alpha_d" + name + " given without model.alpha", nullptr,
            "model.alpha_d" + name);
      if (std::find(model.parameters.begin(), model.parameters.end(), name) ==
          model.parameters.end())
        bad("alpha_d" + name + " refers to undeclared parameter '" + name + "'",
            nullptr, "model.alpha_d" + name);
    }
    for (const auto& [name, text] : model.gamma)
      if (std::find(model.parameters.begin(), model.parameters.end(), name) ==
          model.parameters.end())
        bad("gamma_" + name + " refers to undeclared parameter '" + name + "'",
            nullptr, "model.gamma_" + name);
    if (!config.grid.has_bounds())
      bad("expr models need explicit grid bounds", nullptr, "grid");
    if (model.alpha.empty())
      for (double g : config.sweep.g_values)
        if (g != 0.0)
          bad("sweep.g_values has non-zero entries but model.alpha is empty",
              nullptr, "sweep.g_values");
  }

  if (config.grid.n < 4)
    bad("grid.n must be at least 4", nullptr, "grid.n");
  if (!(config.grid.n_sigma > 0.0))
    bad("grid.n_sigma must be positive", nullptr, "grid.n_sigma");
  if (config.grid.has_bounds()) {
    if (!(*config.grid.x_max > *config.grid.x_min) ||
        !(*config.grid.y_max > *config.grid.y_min))
      bad("grid bounds must satisfy x_min < x_max and y_min < y_max", nullptr,
          "grid");
  }

  if (!(config.derivative.h_rel > 0.0) || !(config.derivative.h_rel < 0.1))
    bad("derivative.h_rel must lie in (0, 0.1)", nullptr, "derivative.h_rel");

  const SweepConfig& sweep = config.sweep;
  if (sweep.points < 1) bad("sweep.points must be at least 1", nullptr,
                            "sweep.points");
  if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to))
    bad("sweep bounds must be finite", nullptr, "sweep");
  if (sweep.points > 1 && sweep.from == sweep.to)
    bad("sweep.from and sweep.to coincide but sweep.points > 1", nullptr,
        "sweep");
  if (sweep.spacing == SweepSpacing::log &&
      (!(sweep.from > 0.0) || !(sweep.to > 0.0)))
    bad("log spacing needs positive sweep bounds", nullptr, "sweep.spacing");
  if (landau && (!(sweep.from > 0.0) || !(sweep.to > 0.0)))
    bad("the field strength B must stay positive over the sweep", nullptr,
        "sweep");
  if (sweep.g_values.empty())
    bad("sweep.g_values must not be empty", nullptr, "sweep.g_values");
  for (double g : sweep.g_values)
    if (!std::isfinite(g))
      bad("sweep.g_values entries must be finite", nullptr, "sweep.g_values");

  if (config.output.format != "csv")
    bad("output.format must be \"csv\"", nullptr, "output.format");
  if (config.output.path.empty())
    bad("output.path must be non-empty", nullptr, "output.path");
}

}  // namespace qmetric

#include "qmetric/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "qmetric/errors.hpp"
#include "qmetric/gauge.hpp"
#include "qmetric/geometry.hpp"
#include "qmetric/landau.hpp"
#include "qmetric/oracle.hpp"

namespace qmetric {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExprAst parse_config_expression(const std::string& text,
                                std::span<const std::string> params,
                                const std::string& field) {
  try {
    return parse_expression(text, params);
  } catch (const ParseError& e) {
    throw ConfigError(field + ": " + e.what(), 0, field);
  }
}

// Everything reusable across rows of one sweep.
struct Engine {
  std::vector<std::string> params;
  std::size_t sweep_index = 0;
  StateFamily base_family;
  Connection base_connection;
  std::optional<GaugePhase> unit_phase;  // scaled by each g
  bool landau = false;
  int m = 0;
};

Engine build_engine(const RunConfig& config) {
  const ModelConfig& model = config.model;
  if (model.type == ModelType::landau) {
    return Engine{{"B"},
                  0,
                  landau_family(model.m, 1.0),  // placeholder, unused
                  landau_connection(0.0),
                  std::nullopt,
                  true,
                  model.m};
  }

  const std::vector<std::string>& params = model.parameters;
  const ExprAst amplitude =
      parse_config_expression(model.amplitude, params, "model.amplitude");
  const ExprAst phase = parse_config_expression(
      model.phase.empty() ? "0" : model.phase, params, "model.phase");
  StateFamily family = make_expr_family(
      amplitude, phase, params,
      model.normalize ? Normalization::enforce : Normalization::trust);

  std::vector<Connection::Entry> entries;
  for (const std::string& p : params) {
    const auto it = model.gamma.find(p);
    if (it == model.gamma.end()) {
      entries.push_back(Connection::Entry::expression(ExprAst::constant(0.0)));
    } else {
      entries.push_back(Connection::Entry::expression(
          parse_config_expression(it->second, params, "model.gamma_" + p)));
    }
  }
  Connection connection(params, std::move(entries));

  std::optional<GaugePhase> unit_phase;
  if (!model.alpha.empty()) {
    std::map<std::string, ExprAst> derivs;
    for (const auto& [name, text] : model.alpha_derivatives)
      derivs.emplace(name, parse_config_expression(text, params,
                                                   "model.alpha_d" + name));
    try {
      unit_phase.emplace(
          parse_config_expression(model.alpha, params, "model.alpha"), params,
          std::move(derivs));
    } catch (const ContractError& e) {
      throw ConfigError(std::string("model.alpha: ") + e.what(), 0,
                        "model.alpha");
    }
  }

  const std::size_t sweep_index = static_cast<std::size_t>(
      std::find(params.begin(), params.end(), config.sweep.parameter) -
      params.begin());
  return Engine{params,        sweep_index, std::move(family),
                std::move(connection), std::move(unit_phase),
                false,         model.m};
}

ParamPoint point_for(const Engine& engine, const RunConfig& config,
                     double value) {
  std::vector<ParamPoint::Entry> entries;
  entries.reserve(engine.params.size());
  for (const std::string& p : engine.params) {
    if (p == config.sweep.parameter)
      entries.emplace_back(p, value);
    else
      entries.emplace_back(p, config.model.fixed_values.at(p));
  }
  return ParamPoint{std::move(entries)};
}

Grid2D grid_for(const RunConfig& config, double value) {
  const GridConfig& g = config.grid;
  if (g.has_bounds())
    return Grid2D(*g.x_min, *g.x_max, *g.y_min, *g.y_max, g.n, g.n);
  return default_grid(value, g.n, g.n_sigma);
}

SweepRow compute_row(const Engine& engine, const RunConfig& config,
                     double value, double g) {
  SweepRow row;
  row.value = value;
  row.g = g;
  const Grid2D grid = grid_for(config, value);
  row.grid_n = grid.nx();
  row.grid_halfwidth = (grid.x_max() - grid.x_min()) / 2.0;
  row.naive = row.covariant = row.beta = row.paper_ref = row.oracle =
      row.herm_residual = row.fd_step = kNaN;

  try {
    const ParamPoint at = point_for(engine, config, value);
    StateFamily family = engine.landau
                             ? landau_family(engine.m, g)
                             : engine.base_family;
    Connection connection = engine.landau ? landau_connection(g)
                                          : engine.base_connection;
    if (!engine.landau && g != 0.0 && engine.unit_phase.has_value()) {
      const GaugePhase scaled = engine.unit_phase->scaled(g);
      family = gauge_transform(family, scaled);
      connection = transform_connection(connection, scaled);
    }

    const QMTResult naive = qmt(family, at, grid, config.derivative);
    const QMTResult covariant =
        covariant_qmt(family, connection, at, grid, config.derivative);
    const std::size_t i = engine.sweep_index;
    row.naive = naive.metric_at(i, i);
    row.covariant = covariant.metric_at(i, i);
    row.beta = naive.beta[i];
    row.fd_step = naive.diagnostics.fd_steps[i];
    row.herm_residual = *std::max_element(
        naive.diagnostics.herm_residuals.begin(),
        naive.diagnostics.herm_residuals.end());
    if (engine.landau) {
      row.paper_ref = reference_qmt_closed_form(value, g);
      row.oracle = oracle_qmt(value, engine.m, g);
    }
  } catch (const NumericalError& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

void append_row(std::string& out, const SweepRow& row) {
  out += fmt(row.value);
  out += ',';
  out += fmt(row.g);
  out += ',';
  out += fmt(row.naive);
  out += ',';
  out += fmt(row.covariant);
  out += ',';
  out += fmt(row.beta);
  out += ',';
  out += fmt(row.paper_ref);
  out += ',';
  out += fmt(row.oracle);
  out += ',';
  out += fmt(row.herm_residual);
  out += ',';
  out += std::to_string(row.grid_n);
  out += ',';
  out += fmt(row.grid_halfwidth);
  out += ',';
  out += fmt(row.fd_step);
  out += '\n';
}

double parse_csv_number(std::string_view cell, const std::string& path) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("malformed numeric cell '" + std::string(cell) +
                      "' in '" + path + "'");
  return v;
}

}  // namespace

bool SweepOutcome::any_failed() const { return first_failed() != nullptr; }

const SweepRow* SweepOutcome::first_failed() const {
  for (const SweepRow& row : rows)
    if (row.failed) return &row;
  return nullptr;
}

SweepOutcome run_sweep(const RunConfig& config) {
  validate(config);
  const Engine engine = build_engine(config);
  SweepOutcome outcome{config, {}};
  for (double value : config.sweep.values())
    for (double g : config.sweep.g_values)
      outcome.rows.push_back(compute_row(engine, config, value, g));
  return outcome;
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::string body(kSweepCsvHeader);
  body += '\n';
  for (const SweepRow& row : rows) append_row(body, row);
  return body;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  const std::string body = sweep_csv_text(rows);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file '" + tmp + "'");
    out << body;
    if (!out.good())
      throw ConfigError("failed while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty CSV file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader)
    throw ConfigError("unexpected CSV header in '" + path + "'");

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 11)
      throw ConfigError("expected 11 cells per row in '" + path + "', got " +
                        std::to_string(cells.size()));
    SweepRow row;
    row.value = parse_csv_number(cells[0], path);
    row.g = parse_csv_number(cells[1], path);
    row.naive = parse_csv_number(cells[2], path);
    row.covariant = parse_csv_number(cells[3], path);
    row.beta = parse_csv_number(cells[4], path);
    row.paper_ref = parse_csv_number(cells[5], path);
    row.oracle = parse_csv_number(cells[6], path);
    row.herm_residual = parse_csv_number(cells[7], path);
    row.grid_n = static_cast<int>(parse_csv_number(cells[8], path));
    row.grid_halfwidth = parse_csv_number(cells[9], path);
    row.fd_step = parse_csv_number(cells[10], path);
    row.failed = std::isnan(row.naive) && std::isnan(row.covariant);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string diagnostics_sidecar_path(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
  return csv_path + ".meta.json";
}

void write_diagnostics_json(const std::string& csv_path,
                            const SweepOutcome& outcome) {
  using nlohmann::json;
  const RunConfig& config = outcome.config;

  json model{{"type", config.model.type == ModelType::landau ? "landau"
                                                             : "expr"}};
  if (config.model.type == ModelType::landau) {
    model["m"] = config.model.m;
  } else {
    model["amplitude"] = config.model.amplitude;
    model["phase"] = config.model.phase.empty() ? "0" : config.model.phase;
    model["alpha"] = config.model.alpha;
    model["parameters"] = config.model.parameters;
    model["normalize"] = config.model.normalize;
    if (!config.model.fixed_values.empty())
      model["fixed_values"] = config.model.fixed_values;
  }

  json grid{{"n", config.grid.n}};
  if (config.grid.has_bounds()) {
    grid["x_min"] = *config.grid.x_min;
    grid["x_max"] = *config.grid.x_max;
    grid["y_min"] = *config.grid.y_min;
    grid["y_max"] = *config.grid.y_max;
  } else {
    grid["n_sigma"] = config.grid.n_sigma;
    grid["sizing"] = "half width n_sigma / sqrt(B)";
  }

  json failed = json::array();
  for (const SweepRow& row : outcome.rows)
    if (row.failed)
      failed.push_back(
          {{"B", row.value}, {"g", row.g}, {"error", row.error}});

  const json doc{
      {"units", "natural units: hbar = c = |e| = 1; area measure d^2x"},
      {"model", model},
      {"grid", grid},
      {"derivative",
       {{"h_rel", config.derivative.h_rel},
        {"richardson", config.derivative.richardson}}},
      {"sweep",
       {{"parameter", config.sweep.parameter},
        {"from", config.sweep.from},
        {"to", config.sweep.to},
        {"points", config.sweep.points},
        {"spacing",
         config.sweep.spacing == SweepSpacing::linear ? "linear" : "log"},
        {"g_values", config.sweep.g_values}}},
      {"columns",
       {{"B", "swept parameter value"},
        {"g", "gauge factor applied to the phase"},
        {"G_naive", "standard metric, gauge dependent"},
        {"G_covariant", "connection-covariant metric"},
        {"beta", "Berry connection along the swept parameter"},
        {"G_paper_ref", "closed form (g^2 + 1/2) / B, landau only"},
        {"G_oracle", "moment oracle value, landau only"},
        {"herm_residual", "max |Re (psi, d psi)| over parameters"},
        {"grid_n", "samples per axis"},
        {"grid_halfwidth", "half width of the x extent"},
        {"fd_step", "finite-difference step actually taken"}}},
      {"tolerances", {{"herm_residual_limit", kHermResidualLimit}}},
      {"rows", outcome.rows.size()},
      {"failed_rows", failed},
  };

  const std::string path = diagnostics_sidecar_path(csv_path);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file '" + tmp + "'");
    out << doc.dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

bool ConvergenceReport::pass() const {
  return plain_ratio >= 3.5 && plain_ratio <= 4.5 && plain_order >= 1.7 &&
         plain_order <= 2.3 && richardson_order >= 3.5 &&
         richardson_below_plain;
}

std::string ConvergenceReport::render() const {
  std::ostringstream out;
  out << "convergence study: landau m = " << m << ", B = " << fmt(B)
      << ", g = " << fmt(g) << "\n";
  out << "moment oracle G_covariant = " << fmt(oracle) << "\n\n";
  out << "grid refinement (covariant metric vs oracle, informational):\n";
  for (const GridRow& row : grid_rows)
    out << "  n = " << row.n << "  G = " << fmt(row.covariant)
        << "  |error| = " << fmt(row.error) << "\n";
  out << "\nderivative error vs exact d/dB (L2 on the grid):\n";
  for (const StepRow& row : step_rows)
    out << "  h_rel = " << fmt(row.h_rel) << "  plain = "
        << fmt(row.plain_error)
        << "  richardson = " << fmt(row.richardson_error) << "\n";
  out << "\nmeasured orders:\n";
  out << "  plain error ratio h vs h/2 at h_rel = 1e-3: " << fmt(plain_ratio)
      << "  (want 4, window [3.5, 4.5])\n";
  out << "  plain decade slope 1e-2 -> 1e-3: " << fmt(plain_order)
      << "  (want 2, window [1.7, 2.3])\n";
  out << "  richardson decade slope 3e-2 -> 3e-3: " << fmt(richardson_order)
      << "  (want 4, at least 3.5)\n";
  out << "  richardson below plain at h_rel = 1e-3: "
      << (richardson_below_plain ? "yes" : "no") << "\n";
  out << "\nverdict: " << (pass() ? "pass" : "FAIL") << "\n";
  return out.str();
}

ConvergenceReport run_convergence(const RunConfig& config) {
  validate(config);
  if (config.model.type != ModelType::landau)
    throw ConfigError(
        "convergence studies need the landau model: only there is the exact "
        "parameter derivative available as ground truth",
        0, "model.type");

  ConvergenceReport report;
  report.B = config.sweep.from;
  report.g = config.model.g;
  report.m = config.model.m;
  report.oracle = oracle_covariant_qmt(report.B, report.m);

  const ParamPoint at{{"B", report.B}};
  for (int n : {64, 128, 256, 512}) {
    const Grid2D grid = config.grid.has_bounds()
                            ? Grid2D(*config.grid.x_min, *config.grid.x_max,
                                     *config.grid.y_min, *config.grid.y_max,
                                     n, n)
                            : default_grid(report.B, n, config.grid.n_sigma);
    const StateFamily family = landau_family(report.m, report.g);
    const QMTResult result = covariant_qmt(
        family, landau_connection(report.g), at, grid, config.derivative);
    report.grid_rows.push_back(
        {n, result.metric_at(0, 0),
         std::abs(result.metric_at(0, 0) - report.oracle)});
  }

  const Grid2D grid = grid_for(config, report.B);
  const StateFamily trusted =
      landau_family(report.m, report.g, Normalization::trust);
  const ComplexField exact =
      landau_state_derivative(report.B, report.m, report.g, grid);
  const auto derivative_error = [&](double h_rel, bool richardson) {
    const DerivativeScheme scheme{h_rel, richardson};
    const ComplexField approx =
        param_derivative(trusted, at, "B", grid, scheme);
    return quadrature_norm(approx - exact);
  };

  for (double h_rel : {1e-2, 1e-3, 1e-4})
    report.step_rows.push_back({h_rel, derivative_error(h_rel, false),
                                derivative_error(h_rel, true)});

  const double plain_1e3 = derivative_error(1e-3, false);
  report.plain_ratio = plain_1e3 / derivative_error(5e-4, false);
  report.plain_order = std::log10(derivative_error(1e-2, false) / plain_1e3);
  report.richardson_order =
      std::log10(derivative_error(3e-2, true) / derivative_error(3e-3, true));
  report.richardson_below_plain =
      derivative_error(1e-3, true) < plain_1e3;
  return report;
}

}  // namespace qmetric

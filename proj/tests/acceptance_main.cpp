// Acceptance gate for the metric engine: eight end-to-end criteria, one
// pass/fail line each, exit 0 only when every one holds. All tolerances are
// pinned here as named constants.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qmetric/cli.hpp"
#include "qmetric/config.hpp"
#include "qmetric/errors.hpp"
#include "qmetric/expr.hpp"
#include "qmetric/family.hpp"
#include "qmetric/field.hpp"
#include "qmetric/gauge.hpp"
#include "qmetric/geometry.hpp"
#include "qmetric/landau.hpp"
#include "qmetric/oracle.hpp"
#include "qmetric/sweep.hpp"

using namespace qmetric;
namespace fs = std::filesystem;

namespace {

constexpr double kTolShiftAbs = 1e-5;        // G(g) - G(0) = g^2
constexpr double kRuntimeLimitSec = 10.0;    // criterion 1 wall clock
constexpr double kTolInvarianceRel = 1e-6;   // covariant pairwise + vs naive(0)
constexpr double kTolBetaAbs = 1e-8;         // |beta_B|
constexpr double kTolOracleRel = 1e-5;       // naive vs moment oracle
constexpr double kTolMomentRel = 1e-9;       // moments vs quadrature
constexpr double kTolCovariantFitRel = 1e-4; // covariant vs 1/(4 B^2)
constexpr double kTolBetaShift = 1e-6;       // randomized shift-law cases
constexpr double kTolFormulations = 1e-10;   // subtracted vs centered naive
constexpr double kTolCentering = 1e-8;       // covariant with Gamma = beta
constexpr double kFdRatioLo = 3.5;           // plain error(h)/error(h/2)
constexpr double kFdRatioHi = 4.5;

int failures = 0;

void run_criterion(int number, const char* label,
                   const std::function<bool(std::string&)>& body) {
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": "
            << label;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One naive/covariant/beta evaluation grid over B x g, shared by criteria
// 2, 3 and 4.
struct MetricTable {
  std::vector<double> Bs{0.5, 1.0, 2.0, 4.0};
  std::vector<double> gs{0.0, 0.5, 1.0, 2.0};
  std::array<std::array<double, 4>, 4> naive{}, cov{}, beta{};
  std::string error;  // non-empty when the build itself failed
};

MetricTable build_table() {
  MetricTable t;
  for (std::size_t i = 0; i < t.Bs.size(); ++i) {
    const double B = t.Bs[i];
    const Grid2D grid = default_grid(B, 256);
    const ParamPoint at{{"B", B}};
    for (std::size_t j = 0; j < t.gs.size(); ++j) {
      const double g = t.gs[j];
      const StateFamily family = landau_family(0, g);
      const QMTResult n = qmt(family, at, grid);
      const QMTResult c = covariant_qmt(family, landau_connection(g), at, grid);
      t.naive[i][j] = n.metric_at(0, 0);
      t.cov[i][j] = c.metric_at(0, 0);
      t.beta[i][j] = n.beta[0];
    }
  }
  return t;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "qmetric_acceptance";
  fs::create_directories(dir);
  return dir;
}

int run_cli_quiet(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"qmetric"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream sink_out, sink_err;
  std::streambuf* const old_out = std::cout.rdbuf(sink_out.rdbuf());
  std::streambuf* const old_err = std::cerr.rdbuf(sink_err.rdbuf());
  int code = -1;
  try {
    code = cli_main(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return code;
}

}  // namespace

int main() {
  MetricTable table;
  try {
    table = build_table();
  } catch (const std::exception& e) {
    table.error = e.what();
  }
  const auto table_ready = [&table](std::string& detail) {
    if (table.error.empty()) return true;
    detail = "metric table failed: " + table.error;
    return false;
  };

  run_criterion(1, "naive metric shifts by g^2 across the gauge family",
                [](std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const Grid2D grid = default_grid(1.0, 256);
    const ParamPoint at{{"B", 1.0}};
    const double base = qmt(landau_family(0, 0.0), at, grid).metric_at(0, 0);
    bool ok = true;
    for (const double g : {0.5, 1.0}) {
      const double shifted =
          qmt(landau_family(0, g), at, grid).metric_at(0, 0);
      if (std::abs(shifted - base - g * g) > kTolShiftAbs) {
        detail += "G(" + fmt(g) + ") - G(0) = " + fmt(shifted - base) + "; ";
        ok = false;
      }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed >= kRuntimeLimitSec) {
      detail += "took " + fmt(elapsed) + " s";
      ok = false;
    }
    return ok;
  });

  run_criterion(2, "covariant metric is gauge independent",
                [&](std::string& detail) {
    if (!table_ready(detail)) return false;
    bool ok = true;
    for (std::size_t i = 0; i < table.Bs.size(); ++i) {
      for (std::size_t j = 0; j < table.gs.size(); ++j) {
        for (std::size_t k = j + 1; k < table.gs.size(); ++k)
          if (!close_rel(table.cov[i][j], table.cov[i][k], kTolInvarianceRel)) {
            detail += "B = " + fmt(table.Bs[i]) + ": cov(g=" +
                      fmt(table.gs[j]) + ") vs cov(g=" + fmt(table.gs[k]) +
                      "); ";
            ok = false;
          }
        if (!close_rel(table.cov[i][j], table.naive[i][0], kTolInvarianceRel)) {
          detail += "B = " + fmt(table.Bs[i]) + ": cov(g=" + fmt(table.gs[j]) +
                    ") vs naive(g=0); ";
          ok = false;
        }
      }
    }
    return ok;
  });

  run_criterion(3, "Berry connection vanishes for every gauge copy",
                [&](std::string& detail) {
    if (!table_ready(detail)) return false;
    bool ok = true;
    for (std::size_t i = 0; i < table.Bs.size(); ++i) {
      if (table.Bs[i] > 2.0) continue;  // criterion set: B in {0.5, 1, 2}
      for (std::size_t j = 0; j < table.gs.size(); ++j)
        if (std::abs(table.beta[i][j]) >= kTolBetaAbs) {
          detail += "beta(B=" + fmt(table.Bs[i]) + ", g=" + fmt(table.gs[j]) +
                    ") = " + fmt(table.beta[i][j]) + "; ";
          ok = false;
        }
    }
    return ok;
  });

  run_criterion(4, "grid metrics and moments match the closed-form oracle",
                [&](std::string& detail) {
    if (!table_ready(detail)) return false;
    bool ok = true;
    for (std::size_t i = 0; i < table.Bs.size(); ++i)
      for (std::size_t j = 0; j < table.gs.size(); ++j) {
        const double expected = oracle_qmt(table.Bs[i], 0, table.gs[j]);
        if (!close_rel(table.naive[i][j], expected, kTolOracleRel)) {
          detail += "naive(B=" + fmt(table.Bs[i]) + ", g=" +
                    fmt(table.gs[j]) + ") vs oracle " + fmt(expected) + "; ";
          ok = false;
        }
      }

    // independent moment cross-check on a high-resolution grid
    const double B = 1.3;
    for (const int m : {0, 2}) {
      const Grid2D grid = default_grid(B, 801, 10.0);
      const ComplexField psi = landau_state(B, m, grid);
      for (int p = 0; p <= 6; ++p)
        for (int q = 0; p + q <= 6; ++q) {
          const double via_grid = expectation(
              psi, RealField::generate(grid, [&](double x, double y) {
                return std::pow(x, p) * std::pow(y, q);
              }));
          const double exact = gaussian_moment({p, q, m, B});
          const bool fine = (p % 2 == 1 || q % 2 == 1)
                                ? std::abs(via_grid) <= kTolMomentRel
                                : close_rel(via_grid, exact, kTolMomentRel);
          if (!fine) {
            detail += "moment x^" + std::to_string(p) + " y^" +
                      std::to_string(q) + " (m=" + std::to_string(m) + "); ";
            ok = false;
          }
        }
    }
    return ok;
  });

  run_criterion(5, "both metrics diverge toward B = 0, covariant as 1/(4 B^2)",
                [](std::string& detail) {
    const std::vector<double> Bs{1.0, 0.5, 0.25, 0.125};
    bool ok = true;
    for (const double g : {0.0, 0.5, 1.0, 2.0}) {
      double prev_naive = -1.0, prev_cov = -1.0;
      for (const double B : Bs) {
        const Grid2D grid = default_grid(B, 256);
        const ParamPoint at{{"B", B}};
        const StateFamily family = landau_family(0, g);
        const double naive = qmt(family, at, grid).metric_at(0, 0);
        const double cov =
            covariant_qmt(family, landau_connection(g), at, grid)
                .metric_at(0, 0);
        if (naive <= prev_naive || cov <= prev_cov) {
          detail += "not increasing at B = " + fmt(B) + ", g = " + fmt(g) +
                    "; ";
          ok = false;
        }
        prev_naive = naive;
        prev_cov = cov;
        if (g == 0.0 && !close_rel(cov, 1.0 / (4.0 * B * B),
                                   kTolCovariantFitRel)) {
          detail += "cov(B=" + fmt(B) + ") = " + fmt(cov) +
                    " vs 1/(4 B^2); ";
          ok = false;
        }
      }
    }
    return ok;
  });

  run_criterion(6, "transformation-law identities hold",
                [](std::string& detail) {
    bool ok = true;

    // (a) shift law on 20 randomized family/phase pairs
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto draw = [&](double lo, double hi) {
      return lo + (hi - lo) * uni(rng);
    };
    const std::vector<std::string> names{"s"};
    const Grid2D grid(-10.0, 10.0, -10.0, 10.0, 161, 161);
    for (int k = 0; k < 20; ++k) {
      const double a = draw(0.8, 1.5), b = draw(0.8, 1.5);
      const double c = draw(-0.5, 0.5);
      const std::string amp = "exp(-s*(" + fmt(a) + "*x^2 + " + fmt(b) +
                              "*y^2)/4)";
      const std::string fam_phase = fmt(c) + "*s*(x + y)/10";
      const std::string alpha = "s*(" + fmt(draw(-0.3, 0.3)) + "*x + " +
                                fmt(draw(-0.3, 0.3)) + "*y + " +
                                fmt(draw(-0.2, 0.2)) + "*x*y + " +
                                fmt(draw(-0.2, 0.2)) + "*x^2 + " +
                                fmt(draw(-0.2, 0.2)) + "*y^2)";
      const StateFamily family =
          make_expr_family(parse_expression(amp, names),
                           parse_expression(fam_phase, names), names,
                           Normalization::enforce);
      const GaugePhase phase(parse_expression(alpha, names), names);
      const ParamPoint at{{"s", draw(0.9, 1.4)}};
      const BetaShift shift = beta_shift_check(family, phase, at, "s", grid);
      if (std::abs(shift.transformed - shift.predicted) >
          kTolBetaShift * std::max(1.0, std::abs(shift.predicted))) {
        detail += "case " + std::to_string(k) + ": lhs " +
                  fmt(shift.transformed) + " vs rhs " + fmt(shift.predicted) +
                  "; ";
        ok = false;
      }
    }

    // (b) subtracted and centered forms of the naive metric coincide
    {
      const Grid2D g256 = default_grid(1.0, 256);
      const ParamPoint at{{"B", 1.0}};
      const StateFamily family = landau_family(0, 0.5);
      const double direct = qmt(family, at, g256).metric_at(0, 0);
      const double centered = qmt_centered(family, at, g256).metric_at(0, 0);
      if (std::abs(direct - centered) >
          kTolFormulations * std::max(1.0, std::abs(direct))) {
        detail += "centered form differs by " + fmt(direct - centered) + "; ";
        ok = false;
      }
    }

    // (c) covariant metric with Gamma = beta reproduces the naive metric
    {
      const std::vector<std::string> s{"s"};
      const StateFamily family = make_expr_family(
          parse_expression("exp(-s*(x^2+y^2)/4)", s),
          parse_expression("s*(x^2+y^2)/8", s), s, Normalization::enforce);
      const Grid2D g129 = Grid2D::square(8.0, 129);
      const ParamPoint at{{"s", 1.0}};
      const QMTResult naive = qmt(family, at, g129);
      const double beta = naive.beta[0];
      const Connection gamma(
          s, {Connection::Entry::sampled(
                 [beta](const ParamPoint&, const Grid2D& g) {
                   return RealField::constant(g, beta);
                 })});
      const double cov =
          covariant_qmt(family, gamma, at, g129).metric_at(0, 0);
      if (std::abs(cov - naive.metric_at(0, 0)) >
          kTolCentering * std::max(1.0, naive.metric_at(0, 0))) {
        detail += "Gamma = beta: " + fmt(cov) + " vs " +
                  fmt(naive.metric_at(0, 0)) + "; ";
        ok = false;
      }
    }
    return ok;
  });

  run_criterion(7, "finite-difference and quadrature convergence behave",
                [](std::string& detail) {
    bool ok = true;

    // plain central differences: error(h) / error(h/2) = 4 on the exact
    // derivative
    const double B = 1.0;
    const StateFamily family = landau_family(0, 0.5, Normalization::trust);
    const Grid2D grid = default_grid(B, 256);
    const ParamPoint at{{"B", B}};
    const ComplexField exact = landau_state_derivative(B, 0, 0.5, grid);
    const auto plain_error = [&](double h_rel) {
      DerivativeScheme scheme;
      scheme.h_rel = h_rel;
      scheme.richardson = false;
      return quadrature_norm(param_derivative(family, at, "B", grid, scheme) -
                             exact);
    };
    const double e_h = plain_error(1e-3);
    const double e_half = plain_error(5e-4);
    const double ratio = e_h / e_half;
    if (!(ratio >= kFdRatioLo && ratio <= kFdRatioHi)) {
      detail += "plain ratio " + fmt(ratio) + "; ";
      ok = false;
    }
    DerivativeScheme rich;
    rich.h_rel = 1e-3;
    const double e_rich =
        quadrature_norm(param_derivative(family, at, "B", grid, rich) - exact);
    if (!(e_rich < e_h)) {
      detail += "richardson " + fmt(e_rich) + " not below plain " + fmt(e_h) +
                "; ";
      ok = false;
    }

    // trapezoid error against the analytic norm shrinks at every doubling
    double prev = 1e300;
    for (const int n : {9, 17, 33}) {
      const double err =
          std::abs(quadrature_norm(landau_state(1.0, 0, Grid2D::square(8.0, n))) -
                   1.0);
      if (!(err < prev)) {
        detail += "quadrature error stalled at n = " + std::to_string(n) +
                  "; ";
        ok = false;
      }
      prev = err;
    }

    // the packaged self-check agrees
    RunConfig config;
    config.model.type = ModelType::landau;
    config.model.g = 0.5;
    config.sweep.from = 1.0;
    config.sweep.to = 1.0;
    config.sweep.points = 1;
    config.sweep.g_values = {0.0};
    validate(config);
    const ConvergenceReport report = run_convergence(config);
    if (!report.pass()) {
      detail += "self-check: plain_ratio " + fmt(report.plain_ratio) +
                ", plain_order " + fmt(report.plain_order) +
                ", richardson_order " + fmt(report.richardson_order) + "; ";
      ok = false;
    }
    return ok;
  });

  run_criterion(8, "parser properties, deterministic CSV and exit codes",
                [](std::string& detail) {
    bool ok = true;

    // canonical form is a fixed point of parse/print
    const std::vector<std::string> decl{"a"};
    for (const std::string& text :
         {std::string("a + x*y^2"), std::string("sin(pi*x) * exp(-a*y)"),
          std::string("(x - y)/(1 + a^2)"),
          std::string("-sqrt(abs(x))^3 + 2^-2")}) {
      const ExprAst once = parse_expression(text, decl);
      const ExprAst twice = parse_expression(once.str(), decl);
      if (twice.str() != once.str() || !once.same_structure(twice)) {
        detail += "round trip failed for '" + text + "'; ";
        ok = false;
      }
    }

    // parsed evaluation matches direct evaluation on random points
    {
      const ExprAst e = parse_expression(
          "exp(-a*(x^2 + y^2)/4) * (1 + sin(x*y))", decl);
      std::mt19937 rng(424243u);
      std::uniform_real_distribution<double> uni(-2.0, 2.0);
      for (int k = 0; k < 50; ++k) {
        const double x = uni(rng), y = uni(rng);
        const double a = std::abs(uni(rng)) + 0.1;
        const double direct =
            std::exp(-a * (x * x + y * y) / 4.0) * (1.0 + std::sin(x * y));
        const double parsed = e.eval(x, y, ParamPoint{{"a", a}});
        if (std::abs(parsed - direct) >
            1e-14 * std::max(1.0, std::abs(direct))) {
          detail += "eval mismatch at case " + std::to_string(k) + "; ";
          ok = false;
        }
      }
    }

    // syntax errors carry the right byte offset
    const std::vector<std::pair<std::string, std::size_t>> broken{
        {"x + ", 4}, {"(x", 2}, {"x $ y", 2}, {"2 + sin x", 8}, {"q + 1", 0}};
    for (const auto& [text, offset] : broken) {
      try {
        (void)parse_expression(text, decl);
        detail += "no error for '" + text + "'; ";
        ok = false;
      } catch (const ParseError& e) {
        if (e.offset() != offset) {
          detail += "'" + text + "' reported offset " +
                    std::to_string(e.offset()) + "; ";
          ok = false;
        }
      }
    }

    // identical configs produce byte-identical CSV
    const fs::path dir = scratch_dir();
    RunConfig config;
    config.model.type = ModelType::landau;
    config.grid.n = 64;
    config.sweep.from = 0.5;
    config.sweep.to = 2.0;
    config.sweep.points = 2;
    config.sweep.spacing = SweepSpacing::log;
    config.sweep.g_values = {0.0, 0.5};
    config.output.path = (dir / "determinism.csv").string();
    validate(config);
    const SweepOutcome one = run_sweep(config);
    const SweepOutcome two = run_sweep(config);
    if (sweep_csv_text(one.rows) != sweep_csv_text(two.rows)) {
      detail += "re-run changed the CSV; ";
      ok = false;
    }
    const std::string path_a = (dir / "det_a.csv").string();
    const std::string path_b = (dir / "det_b.csv").string();
    write_sweep_csv(path_a, one.rows);
    write_sweep_csv(path_b, two.rows);
    const auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    };
    if (slurp(path_a) != slurp(path_b) || slurp(path_a).empty()) {
      detail += "CSV files differ; ";
      ok = false;
    }
    const std::vector<SweepRow> back = read_sweep_csv(path_a);
    if (back.size() != one.rows.size() ||
        back[0].naive != one.rows[0].naive ||
        back[back.size() - 1].covariant !=
            one.rows[one.rows.size() - 1].covariant) {
      detail += "CSV round trip not exact; ";
      ok = false;
    }

    // exit codes: 0 success, 1 config trouble, 2 numerical failure
    if (run_cli_quiet({"models"}) != 0) {
      detail += "models exit code; ";
      ok = false;
    }
    if (run_cli_quiet({"sweep", "--config",
                       (dir / "no_such_file.toml").string()}) != 1) {
      detail += "missing config exit code; ";
      ok = false;
    }
    if (run_cli_quiet({"frobnicate"}) != 1) {
      detail += "unknown subcommand exit code; ";
      ok = false;
    }
    const std::string breach = (dir / "breach.toml").string();
    {
      std::ofstream out(breach, std::ios::binary | std::ios::trunc);
      out << "[model]\ntype = \"expr\"\namplitude = "
             "\"exp(-s*(x^2+y^2)/4)\"\nparameters = [\"s\"]\nnormalize = "
             "false\n\n[grid]\nn = 48\nx_min = -8\nx_max = 8\ny_min = "
             "-8\ny_max = 8\n\n[sweep]\nparameter = \"s\"\nfrom = 1\nto = "
             "2\npoints = 2\n\n[output]\npath = \""
          << (dir / "breach.csv").string() << "\"\n";
    }
    if (run_cli_quiet({"sweep", "--config", breach}) != 2) {
      detail += "hermiticity breach exit code; ";
      ok = false;
    }
    return ok;
  });

  std::cout << "acceptance: " << (8 - failures) << " of 8 criteria passed\n";
  return failures == 0 ? 0 : 1;
}

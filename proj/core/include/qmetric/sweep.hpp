#pragma once

#include <string>
#include <vector>

#include "qmetric/config.hpp"

namespace qmetric {

// One CSV row of a sweep. The first column keeps the fixed name "B"; for
// expr models it holds the value of whatever parameter is swept.
struct SweepRow {
  double value = 0.0;
  double g = 0.0;
  double naive = 0.0;      // standard metric G_ss along the swept parameter
  double covariant = 0.0;  // connection-covariant metric, same component
  double beta = 0.0;
  double paper_ref = 0.0;  // closed form (g^2 + 1/2) / B, landau only
  double oracle = 0.0;     // moment oracle, landau only
  double herm_residual = 0.0;
  int grid_n = 0;
  double grid_halfwidth = 0.0;
  double fd_step = 0.0;
  bool failed = false;
  std::string error;  // reason, when failed
};

inline constexpr const char* kSweepCsvHeader =
    "B,g,G_naive,G_covariant,beta,G_paper_ref,G_oracle,herm_residual,"
    "grid_n,grid_halfwidth,fd_step";

struct SweepOutcome {
  RunConfig config;
  std::vector<SweepRow> rows;

  bool any_failed() const;
  const SweepRow* first_failed() const;
};

// Runs the whole sweep. Rows are ordered sweep value outermost, gauge factor
// innermost. A NumericalError in one row marks it failed (numeric columns
// NaN) and the sweep continues; configuration problems throw immediately.
SweepOutcome run_sweep(const RunConfig& config);

// %.17g CSV with the fixed header.
std::string sweep_csv_text(const std::vector<SweepRow>& rows);

// Same, written atomically to a file (temp file + rename).
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

// JSON sidecar next to the CSV (<stem>.meta.json): config echo, unit system,
// column glossary, tolerances, failed rows.
std::string diagnostics_sidecar_path(const std::string& csv_path);
void write_diagnostics_json(const std::string& csv_path,
                            const SweepOutcome& outcome);

// Self-check of the discretization on the landau model: grid refinement
// against the moment oracle plus measured finite-difference orders on the
// exact derivative. The order assertions are what pass() gates on; the grid
// table is informational because the quadrature error sits at the domain
// truncation floor for any sane n.
struct ConvergenceReport {
  struct GridRow {
    int n = 0;
    double covariant = 0.0;
    double error = 0.0;  // |covariant - oracle|
  };
  struct StepRow {
    double h_rel = 0.0;
    double plain_error = 0.0;       // L2 distance to the exact derivative
    double richardson_error = 0.0;
  };

  double B = 0.0;
  double g = 0.0;
  int m = 0;
  double oracle = 0.0;
  std::vector<GridRow> grid_rows;
  std::vector<StepRow> step_rows;
  double plain_ratio = 0.0;       // error(h) / error(h/2) at h_rel = 1e-3
  double plain_order = 0.0;       // decade slope between h_rel 1e-2 and 1e-3
  double richardson_order = 0.0;  // decade slope between h_rel 3e-2 and 3e-3
  bool richardson_below_plain = false;

  bool pass() const;
  std::string render() const;
};

// Landau models only: the study needs the analytic derivative as ground
// truth. Uses B = sweep.from, g = model.g.
ConvergenceReport run_convergence(const RunConfig& config);

}  // namespace qmetric

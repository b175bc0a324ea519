#include "qmetric/cli.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmetric/config.hpp"
#include "qmetric/errors.hpp"
#include "qmetric/sweep.hpp"

namespace qmetric {

namespace {

int report_failures(const SweepOutcome& outcome) {
  std::size_t failed = 0;
  for (const SweepRow& row : outcome.rows)
    if (row.failed) ++failed;
  if (failed == 0) return 0;
  const SweepRow& first = *outcome.first_failed();
  char head[128];
  std::snprintf(head, sizeof head,
                "%zu of %zu rows failed; first at B = %.17g, g = %.17g: ",
                failed, outcome.rows.size(), first.value, first.g);
  std::cerr << "numerical failure: " << head << first.error << "\n";
  return 2;
}

int do_sweep(const std::string& config_path, const std::string& output) {
  RunConfig config = load_run_config(config_path);
  if (!output.empty()) config.output.path = output;
  const SweepOutcome outcome = run_sweep(config);
  write_sweep_csv(config.output.path, outcome.rows);
  write_diagnostics_json(config.output.path, outcome);
  std::cout << "wrote " << config.output.path << " ("
            << outcome.rows.size() << " rows) and "
            << diagnostics_sidecar_path(config.output.path) << "\n";
  return report_failures(outcome);
}

int do_compare(double B, const std::vector<double>& g_values, int m, int n) {
  RunConfig config;
  config.model.type = ModelType::landau;
  config.model.m = m;
  config.grid.n = n;
  config.sweep.parameter = "B";
  config.sweep.from = B;
  config.sweep.to = B;
  config.sweep.points = 1;
  config.sweep.g_values = g_values;
  const SweepOutcome outcome = run_sweep(config);
  std::cout << sweep_csv_text(outcome.rows);
  return report_failures(outcome);
}

int do_convergence(const std::string& config_path) {
  const RunConfig config = load_run_config(config_path);
  const ConvergenceReport report = run_convergence(config);
  std::cout << report.render();
  if (!report.pass()) {
    std::cerr << "numerical failure: convergence assertions failed\n";
    return 2;
  }
  return 0;
}

void do_models() {
  std::cout <<
      "landau\n"
      "  lowest Landau level state psi_m carrying the phase exp(i g B x y);\n"
      "  g = 0 is the symmetric gauge, g = 1/2 the Landau gauge\n"
      "  parameter: B > 0 (field strength, natural units)\n"
      "  keys: model.m, model.g, grid.n, grid.n_sigma\n"
      "  reference columns: G_paper_ref = (g^2 + 1/2) / B and the moment\n"
      "  oracle G_oracle\n"
      "\n"
      "expr\n"
      "  family amplitude * exp(i phase) over declared parameters, with an\n"
      "  optional unit gauge phase model.alpha scaled by each g value\n"
      "  keys: model.amplitude, model.phase, model.alpha, model.alpha_d<p>,\n"
      "  model.gamma_<p>, model.parameters, model.normalize, [params],\n"
      "  explicit grid bounds\n"
      "  reference columns are NaN (no closed form is assumed)\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"gauge-dependent and covariant quantum metric tensors on 2d grids"};
  app.require_subcommand(1);

  std::string sweep_config, sweep_output;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep from a config file");
  sweep_cmd->add_option("--config", sweep_config, "TOML run configuration")
      ->required();
  sweep_cmd->add_option("--output", sweep_output,
                        "override output.path from the config");

  double compare_B = 0.0;
  std::vector<double> compare_g;
  int compare_m = 0;
  int compare_n = 256;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "one-point landau comparison, CSV on stdout");
  compare_cmd->add_option("--B", compare_B, "field strength")->required();
  compare_cmd
      ->add_option("--g", compare_g, "gauge factors, comma separated")
      ->required()
      ->delimiter(',');
  compare_cmd->add_option("--m", compare_m, "quantum number m")
      ->capture_default_str();
  compare_cmd->add_option("--n", compare_n, "grid samples per axis")
      ->capture_default_str();

  std::string convergence_config;
  CLI::App* convergence_cmd = app.add_subcommand(
      "convergence", "grid and step self-checks for a landau config");
  convergence_cmd
      ->add_option("--config", convergence_config, "TOML run configuration")
      ->required();

  CLI::App* models_cmd =
      app.add_subcommand("models", "describe the available model types");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage error
    return 1;
  }

  try {
    if (sweep_cmd->parsed()) return do_sweep(sweep_config, sweep_output);
    if (compare_cmd->parsed())
      return do_compare(compare_B, compare_g, compare_m, compare_n);
    if (convergence_cmd->parsed()) return do_convergence(convergence_config);
    if (models_cmd->parsed()) {
      do_models();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return 1;
  } catch (const ContractError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace qmetric

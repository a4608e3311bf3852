#include <CLI11.hpp>
#include <string>

#include "robavg/cli.hpp"

namespace {

void add_common_flags(CLI::App* app, robavg::cli::CommonConfig& cfg,
                      std::string& format_name, std::string& methods_csv) {
  app->add_option("--output,-o", cfg.output, "Output table path")->required();
  app->add_option("--format", format_name, "Output format: csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app->add_option("--methods", methods_csv,
                  "Comma-separated method labels (default: all ten)");
  app->add_option("--threads", cfg.threads,
                  "Worker count (default: ROBAVG_THREADS or hardware)");
  app->add_flag("--bandwidth-fallback", cfg.bandwidth_fallback,
                "Use the Silverman bandwidth when the residual IQR is zero");
  app->add_flag("--grid-check", cfg.grid_check,
                "Cross-check the weight optimizer on a 0.1 lattice (M <= 8)");
}

void finish_common(robavg::cli::CommonConfig& cfg, const std::string& format_name,
                   const std::string& methods_csv) {
  cfg.format = format_name == "markdown" ? robavg::cli::OutputFormat::Markdown
                                         : robavg::cli::OutputFormat::Csv;
  cfg.method_labels.clear();
  std::string part;
  std::stringstream ss(methods_csv);
  while (std::getline(ss, part, ','))
    if (!part.empty()) cfg.method_labels.push_back(part);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robavg: outlier-robust Mallows-type model averaging benchmark"};
  app.require_subcommand(1);

  robavg::cli::SimulateConfig sim;
  std::string sim_format = "csv", sim_methods;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo APE tables");
  simulate->add_option("--setting", sim.setting, "A or B")
      ->check(CLI::IsMember({"A", "B"}));
  simulate->add_option("--case", sim.contam_case, "Setting A contamination case 1-3");
  simulate->add_option("--contam", sim.contam_fraction,
                       "Contamination fraction for cases 2-3 (0.07 or 0.15)");
  simulate->add_option("--n", sim.n_values, "Training sizes (Setting A)");
  simulate->add_option("--r2", sim.r2_values, "Population R^2 values (Setting A)");
  simulate->add_option("--sigma", sim.sigma_values, "Error sd values (Setting B)");
  simulate->add_flag("--gross-error", sim.gross_error, "Setting B case II: y_20 = 10");
  simulate->add_flag("--mixture-calibration", sim.mixture_calibration,
                     "Calibrate nu against the contaminated mixture variance");
  simulate->add_option("--R", sim.R, "Replications");
  simulate->add_option("--seed", sim.seed, "Base seed");
  add_common_flags(simulate, sim, sim_format, sim_methods);

  robavg::cli::EvaluateConfig eval;
  std::string eval_format = "csv", eval_methods;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Delete-one APE table");
  evaluate->add_option("--dataset", eval.dataset, "stackloss, hald, or csv:PATH")
      ->required();
  evaluate->add_option("--response", eval.response_column,
                       "Response column name (csv datasets)");
  evaluate->add_option("--outliers", eval.outliers,
                       "1-based outlier rows, e.g. '21' or '1-14'")
      ->trigger_on_parse();
  add_common_flags(evaluate, eval, eval_format, eval_methods);

  robavg::cli::FitConfig fit;
  std::string fit_format = "csv", fit_methods;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Single-method fit report");
  fit_cmd->add_option("--dataset", fit.dataset, "stackloss, hald, or csv:PATH")
      ->required();
  fit_cmd->add_option("--response", fit.response_column,
                      "Response column name (csv datasets)");
  fit_cmd->add_option("--outliers", fit.outliers, "1-based outlier rows");
  fit_cmd->add_option("--method", fit.method_label, "One method label")->required();
  fit_cmd->add_option("--seed", fit.seed, "Seed echoed into the report");
  add_common_flags(fit_cmd, fit, fit_format, fit_methods);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (simulate->parsed()) {
    finish_common(sim, sim_format, sim_methods);
    return robavg::cli::cmd_simulate(sim);
  }
  if (evaluate->parsed()) {
    finish_common(eval, eval_format, eval_methods);
    eval.outliers_given = evaluate->count("--outliers") > 0;
    return robavg::cli::cmd_evaluate(eval);
  }
  finish_common(fit, fit_format, fit_methods);
  fit.outliers_given = fit_cmd->count("--outliers") > 0;
  return robavg::cli::cmd_fit(fit);
}

#include "robavg/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robavg/datasets.hpp"
#include "robavg/errors.hpp"
#include "robavg/simulation.hpp"

namespace robavg::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct Table {
  std::vector<std::string> header_comments;  // config echo lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, const std::string& path, OutputFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  for (const auto& line : table.header_comments) out << "# " << line << "\n";
  if (format == OutputFormat::Csv) {
    for (std::size_t j = 0; j < table.columns.size(); ++j)
      out << (j ? "," : "") << table.columns[j];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
      out << "\n";
    }
  } else {
    out << "|";
    for (const auto& c : table.columns) out << " " << c << " |";
    out << "\n|";
    for (std::size_t j = 0; j < table.columns.size(); ++j) out << " --- |";
    out << "\n";
    for (const auto& row : table.rows) {
      out << "|";
      for (const auto& cell : row) out << " " << cell << " |";
      out << "\n";
    }
  }
}

std::string sidecar_path(const std::string& output) {
  const auto dot = output.rfind('.');
  if (dot == std::string::npos) return output + ".se";
  return output.substr(0, dot) + ".se" + output.substr(dot);
}

std::vector<MethodId> resolve_methods(const std::vector<std::string>& labels,
                                      std::string& bad_label) {
  if (labels.empty()) return all_methods();
  std::vector<MethodId> out;
  for (const auto& label : labels) {
    const auto id = parse_method_label(label);
    if (!id) {
      bad_label = label;
      return {};
    }
    out.push_back(*id);
  }
  return out;
}

PipelineOptions pipeline_options(const CommonConfig& cfg) {
  PipelineOptions opts;
  opts.bandwidth_fallback = cfg.bandwidth_fallback ? BandwidthFallback::SilvermanRule
                                                   : BandwidthFallback::Error;
  opts.simplex.grid_check = cfg.grid_check;
  return opts;
}

std::string contam_case_name(int c) {
  switch (c) {
    case 1: return "1";
    case 2: return "2";
    case 3: return "3";
  }
  return "?";
}

struct LoadedDataset {
  NamedDataset named;
  Dataset design_with_intercept;
  CandidateSet set;
};

/// Resolves the dataset selector, augments with an intercept column, and
/// builds the all-subsets candidate set over the raw predictors.
LoadedDataset resolve_dataset(const std::string& selector,
                              const std::string& response_column,
                              const std::string& outliers, bool outliers_given) {
  LoadedDataset out;
  if (selector == "stackloss") {
    out.named = stackloss();
  } else if (selector == "hald") {
    out.named = hald_cement();
  } else if (selector.rfind("csv:", 0) == 0) {
    if (response_column.empty())
      throw ParseError("csv datasets need --response");
    out.named = load_csv(selector.substr(4), response_column, {});
  } else {
    throw ParseError("unknown dataset '" + selector + "'");
  }
  if (outliers_given) out.named.outlier_rows = parse_index_list(outliers);
  for (int r : out.named.outlier_rows)
    if (r < 0 || r >= out.named.data.n())
      throw ParseError("outlier index out of range for dataset");
  out.design_with_intercept = with_intercept(out.named.data);
  out.set = all_subsets_with_intercept(out.named.data.p());
  return out;
}

}  // namespace

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(part) - 1);
      } else {
        const int lo = std::stoi(part.substr(0, dash));
        const int hi = std::stoi(part.substr(dash + 1));
        if (hi < lo) throw ParseError("descending range '" + part + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v - 1);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad index '" + part + "'");
    } catch (const std::out_of_range&) {
      throw ParseError("bad index '" + part + "'");
    }
  }
  return out;
}

int cmd_simulate(const SimulateConfig& cfg) {
  std::string bad_label;
  const std::vector<MethodId> methods = resolve_methods(cfg.method_labels, bad_label);
  if (!bad_label.empty()) {
    std::cerr << "error: unknown method label '" << bad_label << "'\n";
    return kExitConfig;
  }
  if (cfg.setting != "A" && cfg.setting != "B") {
    std::cerr << "error: --setting must be A or B\n";
    return kExitConfig;
  }
  if (cfg.output.empty()) {
    std::cerr << "error: --output is required\n";
    return kExitConfig;
  }
  if (cfg.R < 1) {
    std::cerr << "error: --R must be >= 1\n";
    return kExitConfig;
  }
  if (cfg.setting == "A" &&
      (cfg.contam_case < 1 || cfg.contam_case > 3)) {
    std::cerr << "error: --case must be 1, 2 or 3\n";
    return kExitConfig;
  }

  const PipelineOptions opts = pipeline_options(cfg);

  std::ostringstream echo;
  echo << "robavg simulate setting=" << cfg.setting;
  if (cfg.setting == "A")
    echo << " case=" << cfg.contam_case << " contam=" << cfg.contam_fraction;
  else
    echo << " case=" << (cfg.gross_error ? "II" : "I");
  echo << " R=" << cfg.R << " seed=" << cfg.seed << " methods=";
  for (std::size_t i = 0; i < methods.size(); ++i)
    echo << (i ? "," : "") << method_label(methods[i]);

  Table ape_table, se_table;
  ape_table.header_comments.push_back(echo.str());
  se_table.header_comments.push_back(echo.str() + " (standard errors)");

  if (cfg.setting == "A") {
    ape_table.columns = {"setting", "case", "contam", "n", "r2"};
  } else {
    ape_table.columns = {"setting", "case", "sigma"};
  }
  for (MethodId id : methods) ape_table.columns.push_back(method_label(id));
  se_table.columns = ape_table.columns;

  std::vector<int> failed;
  try {
    if (cfg.setting == "A") {
      for (int n : cfg.n_values) {
        for (double r2 : cfg.r2_values) {
          SettingAConfig base;
          base.n = n;
          base.r_squared = r2;
          base.contam_case = static_cast<ContamCase>(cfg.contam_case);
          base.contam_fraction = cfg.contam_case == 1 ? 0.0 : cfg.contam_fraction;
          base.mixture_variance_calibration = cfg.mixture_calibration;
          const ReplicationTable result =
              run_replications_a(base, methods, cfg.R, cfg.seed, opts, cfg.threads);
          failed.insert(failed.end(), result.failed_replications.begin(),
                        result.failed_replications.end());
          std::vector<std::string> row = {"A", contam_case_name(cfg.contam_case),
                                          format_double(base.contam_fraction),
                                          std::to_string(n), format_double(r2)};
          std::vector<std::string> se_row = row;
          for (const auto& report : result.reports) {
            row.push_back(format_double(report.ape));
            se_row.push_back(format_double(report.se));
          }
          ape_table.rows.push_back(std::move(row));
          se_table.rows.push_back(std::move(se_row));
        }
      }
    } else {
      for (double sigma : cfg.sigma_values) {
        SettingBConfig base;
        base.sigma = sigma;
        base.with_gross_error = cfg.gross_error;
        const ReplicationTable result =
            run_replications_b(base, methods, cfg.R, cfg.seed, opts, cfg.threads);
        failed.insert(failed.end(), result.failed_replications.begin(),
                      result.failed_replications.end());
        std::vector<std::string> row = {"B", cfg.gross_error ? "II" : "I",
                                        format_double(sigma)};
        std::vector<std::string> se_row = row;
        for (const auto& report : result.reports) {
          row.push_back(format_double(report.ape));
          se_row.push_back(format_double(report.se));
        }
        ape_table.rows.push_back(std::move(row));
        se_table.rows.push_back(std::move(se_row));
      }
    }
    write_table(ape_table, cfg.output, cfg.format);
    write_table(se_table, sidecar_path(cfg.output), cfg.format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (!failed.empty()) {
    std::cerr << "error: " << failed.size() << " replication(s) failed:";
    for (int r : failed) std::cerr << " " << r;
    std::cerr << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_evaluate(const EvaluateConfig& cfg) {
  std::string bad_label;
  const std::vector<MethodId> methods = resolve_methods(cfg.method_labels, bad_label);
  if (!bad_label.empty()) {
    std::cerr << "error: unknown method label '" << bad_label << "'\n";
    return kExitConfig;
  }
  if (cfg.output.empty()) {
    std::cerr << "error: --output is required\n";
    return kExitConfig;
  }

  LoadedDataset loaded;
  try {
    loaded = resolve_dataset(cfg.dataset, cfg.response_column, cfg.outliers,
                             cfg.outliers_given);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const PipelineOptions opts = pipeline_options(cfg);
  std::ostringstream echo;
  echo << "robavg evaluate dataset=" << loaded.named.name
       << " n=" << loaded.named.data.n() << " outliers=";
  for (std::size_t i = 0; i < loaded.named.outlier_rows.size(); ++i)
    echo << (i ? "," : "") << loaded.named.outlier_rows[i] + 1;

  Table ape_table, se_table;
  ape_table.header_comments.push_back(echo.str());
  se_table.header_comments.push_back(echo.str() + " (standard errors)");
  ape_table.columns = {"dataset", "n", "n_outliers"};
  for (MethodId id : methods) ape_table.columns.push_back(method_label(id));
  se_table.columns = ape_table.columns;

  std::vector<std::string> row = {loaded.named.name,
                                  std::to_string(loaded.named.data.n()),
                                  std::to_string(loaded.named.outlier_rows.size())};
  std::vector<std::string> se_row = row;
  try {
    for (MethodId id : methods) {
      const ApeReport report =
          delete_one_eval(loaded.design_with_intercept, loaded.named.outlier_rows,
                          loaded.set, id, opts, cfg.threads);
      row.push_back(format_double(report.ape));
      se_row.push_back(format_double(report.se));
    }
    ape_table.rows.push_back(std::move(row));
    se_table.rows.push_back(std::move(se_row));
    write_table(ape_table, cfg.output, cfg.format);
    write_table(se_table, sidecar_path(cfg.output), cfg.format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_fit(const FitConfig& cfg) {
  const auto id = parse_method_label(cfg.method_label);
  if (!id) {
    std::cerr << "error: unknown method label '" << cfg.method_label << "'\n";
    return kExitConfig;
  }
  if (cfg.output.empty()) {
    std::cerr << "error: --output is required\n";
    return kExitConfig;
  }
  LoadedDataset loaded;
  try {
    loaded = resolve_dataset(cfg.dataset, cfg.response_column, cfg.outliers,
                             cfg.outliers_given);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const PipelineOptions opts = pipeline_options(cfg);
  try {
    const MethodFit fit =
        fit_with_method(*id, loaded.design_with_intercept, loaded.set, opts);

    std::ofstream out(cfg.output);
    if (!out) throw ParseError("cannot write '" + cfg.output + "'");
    out << "# robavg fit dataset=" << loaded.named.name
        << " method=" << cfg.method_label << " seed=" << cfg.seed << "\n";
    if (fit.is_averaging) {
      out << "kind,averaging\n";
      out << "criterion_value," << format_double(fit.criterion.criterion_value) << "\n";
      out << "loss_term," << format_double(fit.criterion.loss_term) << "\n";
      out << "penalty_term," << format_double(fit.criterion.penalty_term) << "\n";
      out << "model_id,k,weight\n";
      for (int m = 0; m < loaded.set.size(); ++m)
        out << m << "," << loaded.set.models[static_cast<std::size_t>(m)].k() << ","
            << format_double(fit.weights[m]) << "\n";
      out << "weight_sum," << format_double(fit.weights.sum()) << "\n";
    } else {
      out << "kind,selection\n";
      out << "chosen," << fit.chosen << "\n";
      out << "model_id,k,score\n";
      for (int m = 0; m < loaded.set.size(); ++m)
        out << m << "," << loaded.set.models[static_cast<std::size_t>(m)].k() << ","
            << format_double(fit.selection.scores[m]) << "\n";
      out << "coefficients";
      for (Eigen::Index j = 0; j < fit.chosen_theta.size(); ++j)
        out << "," << format_double(fit.chosen_theta[j]);
      out << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace robavg::cli

#ifndef ROBAVG_CLI_HPP
#define ROBAVG_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "robavg/methods.hpp"

namespace robavg::cli {

enum class OutputFormat { Csv, Markdown };

struct CommonConfig {
  std::vector<std::string> method_labels;  // empty = all ten, paper order
  std::string output;                      // table path; SE sidecar adds .se
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;                         // 0 = ROBAVG_THREADS / hardware
  bool bandwidth_fallback = false;         // opt-in Silverman fallback
  bool grid_check = false;                 // lattice cross-check for M <= 8
};

struct SimulateConfig : CommonConfig {
  std::string setting = "A";          // "A" or "B"
  int contam_case = 1;                // Setting A: 1..3
  double contam_fraction = 0.07;      // Setting A cases 2-3
  std::vector<int> n_values = {100};  // Setting A
  std::vector<double> r2_values = {0.5};
  std::vector<double> sigma_values = {1.0};  // Setting B
  bool gross_error = false;                  // Setting B case II
  bool mixture_calibration = false;
  int R = 500;
  std::uint64_t seed = 1;
};

struct EvaluateConfig : CommonConfig {
  std::string dataset;                 // "stackloss", "hald", or "csv:PATH"
  std::string response_column;         // csv datasets
  std::string outliers;                // 1-based list/ranges, e.g. "1-14,21"
  bool outliers_given = false;         // distinguishes "" from unset
};

struct FitConfig : CommonConfig {
  std::string dataset;
  std::string response_column;
  std::string outliers;
  bool outliers_given = false;
  std::string method_label = "MMA";
  std::uint64_t seed = 1;  // echoed for reproducibility; fit itself is deterministic
};

/// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
int cmd_simulate(const SimulateConfig& cfg);
int cmd_evaluate(const EvaluateConfig& cfg);
int cmd_fit(const FitConfig& cfg);

/// Parses "1-14,21" style 1-based index lists into 0-based row indices.
std::vector<int> parse_index_list(const std::string& text);

}  // namespace robavg::cli

#endif  // ROBAVG_CLI_HPP

#ifndef ROBAVG_DATASETS_HPP
#define ROBAVG_DATASETS_HPP

#include <string>
#include <vector>

#include "robavg/regression.hpp"

namespace robavg {

struct NamedDataset {
  std::string name;
  Dataset data;                   // raw predictors only (no intercept column)
  std::string response_name;
  std::vector<int> outlier_rows;  // 0-based row indices
  std::string provenance;
};

/// Stack-loss plant data: 21 rows, response "stack_loss", predictors
/// air_flow, water_temp, acid_conc. Observation 21 (row index 20) is the
/// declared outlier.
NamedDataset stackloss();

/// Hald cement data: 13 rows, response "y", predictors x1..x4; no declared
/// outliers.
NamedDataset hald_cement();

/// Loads a comma-separated file with a header row; every cell must be
/// numeric. The named response column becomes the response, all others the
/// predictors in file order. outlier_rows are 0-based data-row indices.
NamedDataset load_csv(const std::string& path, const std::string& response_column,
                      std::vector<int> outlier_rows = {});

}  // namespace robavg

#endif  // ROBAVG_DATASETS_HPP

#ifndef ROBAVG_EVALUATION_HPP
#define ROBAVG_EVALUATION_HPP

#include <string>
#include <vector>

#include "robavg/methods.hpp"

namespace robavg {

struct ApeReport {
  std::string method;
  std::vector<double> per_replication_pe;  // one PE per replication or fold
  double ape = 0.0;                        // mean of per_replication_pe
  double se = 0.0;                         // sd / sqrt(count)
  int n_eval = 0;

  static ApeReport from_pes(std::string method, std::vector<double> pes);
};

/// Mean absolute deviation (1/n) sum |y_i - yhat_i|.
double prediction_error(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_hat);

/// Delete-one protocol: every non-outlier row is predicted once from a model
/// trained on all remaining rows (declared outliers are always retained in
/// training, never predicted). outlier_rows are 0-based.
ApeReport delete_one_eval(const Dataset& data, const std::vector<int>& outlier_rows,
                          const CandidateSet& set, MethodId method,
                          const PipelineOptions& opts = {}, int threads = 0);

}  // namespace robavg

#endif  // ROBAVG_EVALUATION_HPP

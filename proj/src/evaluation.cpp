#include "robavg/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "robavg/errors.hpp"
#include "robavg/parallel.hpp"
#include "robavg/stats.hpp"

namespace robavg {

ApeReport ApeReport::from_pes(std::string method, std::vector<double> pes) {
  ApeReport out;
  out.method = std::move(method);
  out.per_replication_pe = std::move(pes);
  out.n_eval = static_cast<int>(out.per_replication_pe.size());
  if (out.n_eval > 0) {
    out.ape = mean(out.per_replication_pe);
    out.se = stddev(out.per_replication_pe) / std::sqrt(static_cast<double>(out.n_eval));
  }
  return out;
}

double prediction_error(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_hat) {
  if (y_true.size() != y_hat.size() || y_true.size() == 0)
    throw LengthMismatchError("prediction_error needs equal nonzero lengths");
  return (y_true - y_hat).cwiseAbs().sum() / static_cast<double>(y_true.size());
}

ApeReport delete_one_eval(const Dataset& data, const std::vector<int>& outlier_rows,
                          const CandidateSet& set, MethodId method,
                          const PipelineOptions& opts, int threads) {
  data.validate();
  const int n = data.n();
  std::vector<bool> is_outlier(static_cast<std::size_t>(n), false);
  for (int r : outlier_rows) {
    if (r < 0 || r >= n) throw DimensionMismatchError("outlier row out of range");
    is_outlier[static_cast<std::size_t>(r)] = true;
  }
  std::vector<int> targets;
  for (int i = 0; i < n; ++i)
    if (!is_outlier[static_cast<std::size_t>(i)]) targets.push_back(i);
  if (targets.size() < 2)
    throw DimensionMismatchError("need at least 2 non-outlier rows");

  std::vector<double> abs_errors(targets.size(), 0.0);
  parallel_for(
      static_cast<int>(targets.size()),
      [&](int t) {
        const int row = targets[static_cast<std::size_t>(t)];
        Dataset train;
        train.design.resize(n - 1, data.p());
        train.response.resize(n - 1);
        int out_row = 0;
        for (int i = 0; i < n; ++i) {
          if (i == row) continue;
          train.design.row(out_row) = data.design.row(i);
          train.response[out_row] = data.response[i];
          ++out_row;
        }
        try {
          const Eigen::VectorXd pred =
              predict_with_method(method, train, set, data.design.row(row), opts);
          abs_errors[static_cast<std::size_t>(t)] =
              std::abs(data.response[row] - pred[0]);
        } catch (const Error& e) {
          throw Error("fold " + std::to_string(row) + ": " + e.what());
        }
      },
      threads);

  return ApeReport::from_pes(method_label(method), std::move(abs_errors));
}

}  // namespace robavg

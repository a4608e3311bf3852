#ifndef ROBAVG_REGRESSION_HPP
#define ROBAVG_REGRESSION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "robavg/candidates.hpp"
#include "robavg/losses.hpp"

namespace robavg {

struct Dataset {
  Eigen::MatrixXd design;    // n x p
  Eigen::VectorXd response;  // n
  std::vector<std::string> column_names;  // optional, size p when present

  int n() const { return static_cast<int>(design.rows()); }
  int p() const { return static_cast<int>(design.cols()); }

  /// Checks n >= p >= 1, matching lengths, and all entries finite.
  void validate() const;
};

/// Returns a copy of `data` with a leading all-ones column.
Dataset with_intercept(const Dataset& data);

struct SolverOptions {
  double tol = 1e-8;       // max |delta theta| convergence threshold
  int max_iter = 200;
  double rank_tol = 1e-10; // relative pivot tolerance for the rank check
  bool record_trace = false;
};

struct FitResult {
  CandidateModel model;
  Eigen::VectorXd theta;      // k_m coefficients
  Eigen::VectorXd residuals;  // n
  double objective = 0.0;     // sum_i rho(residual_i)
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_trace;  // filled when record_trace
};

/// M-estimator fit for one candidate model: closed-form least squares for
/// the square loss; otherwise IRLS with weights rho1(r)/(2r), started at the
/// least-squares solution. Non-convergence is reported via the flag; the
/// returned result carries the best iterate.
FitResult fit_m_estimator(const Dataset& data, const CandidateModel& model,
                          const LossSpec& spec, const SolverOptions& opts = {});

struct FitBundle {
  CandidateSet set;
  LossSpec loss;
  std::vector<FitResult> fits;      // aligned with set.models
  Eigen::MatrixXd residual_matrix;  // n x M, column m = residuals of model m
  Eigen::VectorXd model_sizes;      // k_m per model, kept as doubles
  double sigma2_hat = 0.0;          // from the largest model's LS residuals

  int n() const { return static_cast<int>(residual_matrix.rows()); }
  int M() const { return static_cast<int>(residual_matrix.cols()); }
  const FitResult& largest_fit() const { return fits[set.largest_index]; }
};

/// Fits every candidate model under `spec`. sigma2_hat always comes from the
/// least-squares fit of the largest model, whatever the loss.
FitBundle fit_all(const Dataset& data, const CandidateSet& set,
                  const LossSpec& spec, const SolverOptions& opts = {});

}  // namespace robavg

#endif  // ROBAVG_REGRESSION_HPP

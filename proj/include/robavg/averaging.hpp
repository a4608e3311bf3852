#ifndef ROBAVG_AVERAGING_HPP
#define ROBAVG_AVERAGING_HPP

#include <Eigen/Dense>
#include <functional>

#include "robavg/regression.hpp"

namespace robavg {

/// Point on the unit simplex: entries in [0,1] summing to one.
struct WeightVector {
  Eigen::VectorXd w;

  void validate(double tol = 1e-10) const;
};

enum class CriterionMethod { MtcFixed, MtcRandom, Mma };

struct CriterionBreakdown {
  double value = 0.0;
  double loss_term = 0.0;
  double penalty_term = 0.0;
  Eigen::VectorXd per_model_penalties;  // C_rho(m) per model (random design)
};

struct CriterionReport {
  CriterionMethod method = CriterionMethod::Mma;
  LossSpec loss;
  WeightVector weights;
  double criterion_value = 0.0;
  double loss_term = 0.0;
  double penalty_term = 0.0;
  int optimizer_iterations = 0;
  int restarts_used = 0;
};

/// Averaged residuals sum_m w_m * eps_hat_{i(m)}; defined for any w, not
/// just simplex points, which finite-difference probes rely on.
Eigen::VectorXd averaged_residuals(const FitBundle& bundle, const Eigen::VectorXd& w);

/// Fixed-design criterion: sum_i rho(eps_i(w)) + c_rho * sum_m w_m k_m.
CriterionBreakdown criterion_fixed(const FitBundle& bundle, const LossSpec& spec,
                                   const Eigen::VectorXd& w, double c_rho);

/// Random-design criterion; the per-model penalty constants depend on w
/// through the averaged residuals. Square loss reduces to the fixed-design
/// criterion with c_rho = 2*sigma2_hat.
CriterionBreakdown criterion_random(const FitBundle& bundle, const LossSpec& spec,
                                    const Eigen::VectorXd& w,
                                    BandwidthFallback fallback = BandwidthFallback::Error);

/// Classical Mallows model-average criterion (square loss).
double criterion_mma(const FitBundle& bundle, const Eigen::VectorXd& w);

/// Precomputes everything about the random-design criterion that does not
/// depend on w (rho1 of each residual column, per-model curvature averages),
/// so the optimizer pays O(nM) per evaluation.
class RandomCriterionContext {
 public:
  RandomCriterionContext(const FitBundle& bundle, const LossSpec& spec,
                         BandwidthFallback fallback = BandwidthFallback::Error);

  CriterionBreakdown evaluate(const Eigen::VectorXd& w) const;
  double operator()(const Eigen::VectorXd& w) const { return evaluate(w).value; }

 private:
  const FitBundle* bundle_;
  LossSpec spec_;
  Eigen::MatrixXd rho1_columns_;  // n x M
  Eigen::VectorXd curvatures_;    // M
};

struct SimplexOptions {
  int max_iter = 500;
  double fd_step = 1e-6;          // finite-difference step
  double tol_scale = 1e-6;        // stop at grad residual < tol_scale*(1+|f|)
  double armijo_sigma = 1e-4;
  int max_backtracks = 60;
  bool grid_check = false;        // lattice scan for M <= 8
  double grid_spacing = 0.1;
};

struct SimplexMinimizeResult {
  Eigen::VectorXd weights;
  double value = 0.0;
  int iterations = 0;     // total across restarts
  int restarts_used = 0;
  bool grid_point_won = false;
};

/// Euclidean projection onto the unit simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Projected-gradient descent with finite-difference gradients, Armijo
/// backtracking, and restarts from every vertex plus the uniform point.
/// The returned value can never exceed the best vertex value.
SimplexMinimizeResult minimize_over_simplex(
    const std::function<double(const Eigen::VectorXd&)>& objective, int M,
    const SimplexOptions& opts = {});

/// Weighted prediction sum_m w_m x_(m)^T theta_(m) for new design rows
/// (full p columns; each model picks its own subset).
Eigen::VectorXd average_predict(const FitBundle& bundle, const Eigen::VectorXd& w,
                                const Eigen::MatrixXd& new_design);

/// Assembles the per-method report at the optimizer's terminal weights.
CriterionReport make_criterion_report(CriterionMethod method, const FitBundle& bundle,
                                      const LossSpec& spec, double c_rho_fixed_value,
                                      const SimplexMinimizeResult& opt,
                                      BandwidthFallback fallback = BandwidthFallback::Error);

}  // namespace robavg

#endif  // ROBAVG_AVERAGING_HPP

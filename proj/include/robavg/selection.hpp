#ifndef ROBAVG_SELECTION_HPP
#define ROBAVG_SELECTION_HPP

#include <Eigen/Dense>

#include "robavg/regression.hpp"

namespace robavg {

enum class SelectionMethod { HCp, MCp, MS_A, MS_H, WCp, MMA_select };

struct SelectionReport {
  SelectionMethod method = SelectionMethod::MS_H;
  Eigen::VectorXd scores;     // one score per model
  Eigen::VectorXd auxiliary;  // V_m for the RCp family, empty otherwise
  int chosen = 0;
};

enum class RcpWeighting { HuberType, MallowsType };

/// Robust Mallows Cp scores RC_p(k_m) = W_m/sigma_tilde^2 - (U_m - V_m) for
/// Huber-type (HCp) or Mallows-type (MCp) weighting, with the expectation
/// constants estimated by sample moments at the full-model residuals.
/// Chooses the model with RC_p closest to V_m among those with RC_p <= V_m,
/// falling back to the global argmin of RC_p - V_m.
SelectionReport rcp_scores(const Dataset& data, const CandidateSet& set,
                           RcpWeighting weighting, double huber_c = 1.345,
                           const SolverOptions& opts = {});

/// rcp_scores plus the per-model pieces (weighted RSS, constants, scale).
struct RcpDetail {
  SelectionReport report;
  Eigen::VectorXd weighted_rss;  // W_m
  Eigen::VectorXd u_minus_v;     // U_m - V_m
  Eigen::VectorXd v;             // V_m
  double sigma_tilde2 = 0.0;     // W_M / U_M
};

RcpDetail rcp_scores_detailed(const Dataset& data, const CandidateSet& set,
                              RcpWeighting weighting, double huber_c = 1.345,
                              const SolverOptions& opts = {});

/// Akaike-type scores: sum_i rho(eps_{i(m)}) + c_rho * k_m, minimum wins.
SelectionReport akaike_type_scores(const FitBundle& bundle, const LossSpec& spec,
                                   double c_rho);

/// Fits the Mallows-type GM estimator (leverage factor v(x) = min(1, kappa /
/// ||x||^2) with kappa the median squared row norm) for one candidate model.
FitResult fit_gm_estimator(const Dataset& data, const CandidateModel& model,
                           double huber_c = 1.345, const SolverOptions& opts = {});

struct WLWeights {
  Eigen::VectorXd phi;      // likelihood weights in [0,1]
  Eigen::VectorXd pearson;  // Pearson residuals delta_i > -1
  Eigen::VectorXd theta_w;  // weighted-likelihood coefficients
  double sigma_w = 0.0;     // weighted-likelihood scale (standard deviation)
  int iterations = 0;
  bool converged = true;
};

struct WlOptions {
  double tol = 1e-8;
  int max_iter = 100;
  double h_factor = 0.032;  // kernel variance = h_factor * sigma^2
};

/// Weighted-likelihood fit under a normal working model: Pearson residuals
/// from a Gaussian-kernel smoothed empirical density against the smoothed
/// model density N(0, sigma^2 + h), Hellinger residual adjustment
/// A(d) = 2(sqrt(d+1) - 1), and phi-weighted normal-score updates.
WLWeights wl_fit(const Dataset& data, const CandidateModel& model,
                 const WlOptions& opts = {});

/// Score assembly for one model: sum(phi z^2)/sigma^2 - sum(phi) + 2k.
double wcp_score_from(const Eigen::VectorXd& phi, const Eigen::VectorXd& z_own,
                      double sigma2, int k_m);

/// Weighted Mallows Cp: phi-weights at the anchor (largest-model WLE)
/// coefficients restricted to each model; z in the first sum at each model's
/// own WLE fit. Minimum score wins.
SelectionReport wcp_scores(const Dataset& data, const CandidateSet& set,
                           const WlOptions& opts = {});

}  // namespace robavg

#endif  // ROBAVG_SELECTION_HPP

#ifndef ROBAVG_METHODS_HPP
#define ROBAVG_METHODS_HPP

#include <optional>
#include <string>
#include <vector>

#include "robavg/averaging.hpp"
#include "robavg/selection.hpp"

namespace robavg {

/// The ten benchmarked procedures, in the fixed table column order.
/// The "c" suffix marks the fixed-design criterion variants.
enum class MethodId { MA_A, MA_Ac, MS_A, MA_H, MA_Hc, MS_H, WCp, MCp, HCp, MMA };

const std::vector<MethodId>& all_methods();
std::string method_label(MethodId id);
std::optional<MethodId> parse_method_label(const std::string& label);

struct PipelineOptions {
  SolverOptions solver;
  SimplexOptions simplex;
  WlOptions wl;
  BandwidthFallback bandwidth_fallback = BandwidthFallback::Error;
  double huber_c = 1.345;
};

/// Everything a method produces on a training set: weights plus criterion
/// report for averaging methods; scores plus the chosen model's coefficients
/// for selection methods.
struct MethodFit {
  MethodId id = MethodId::MMA;
  bool is_averaging = false;
  std::optional<FitBundle> bundle;     // present for averaging and MS_* methods
  Eigen::VectorXd weights;             // averaging methods
  CriterionReport criterion;           // averaging methods
  SelectionReport selection;           // selection methods
  int chosen = -1;
  Eigen::VectorXd chosen_theta;        // selection methods
  std::vector<int> chosen_columns;     // selection methods
};

MethodFit fit_with_method(MethodId id, const Dataset& train, const CandidateSet& set,
                          const PipelineOptions& opts = {});

Eigen::VectorXd predict(const MethodFit& fit, const Eigen::MatrixXd& new_design);

/// Convenience: fit on train, predict the new design rows.
Eigen::VectorXd predict_with_method(MethodId id, const Dataset& train,
                                    const CandidateSet& set,
                                    const Eigen::MatrixXd& new_design,
                                    const PipelineOptions& opts = {});

}  // namespace robavg

#endif  // ROBAVG_METHODS_HPP

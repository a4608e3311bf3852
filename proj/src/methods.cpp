#include "robavg/methods.hpp"

#include <span>

#include "robavg/errors.hpp"

namespace robavg {

const std::vector<MethodId>& all_methods() {
  static const std::vector<MethodId> order = {
      MethodId::MA_A, MethodId::MA_Ac, MethodId::MS_A, MethodId::MA_H,
      MethodId::MA_Hc, MethodId::MS_H, MethodId::WCp,  MethodId::MCp,
      MethodId::HCp,  MethodId::MMA};
  return order;
}

std::string method_label(MethodId id) {
  switch (id) {
    case MethodId::MA_A: return "MA_A";
    case MethodId::MA_Ac: return "MA_Ac";
    case MethodId::MS_A: return "MS_A";
    case MethodId::MA_H: return "MA_H";
    case MethodId::MA_Hc: return "MA_Hc";
    case MethodId::MS_H: return "MS_H";
    case MethodId::WCp: return "WCp";
    case MethodId::MCp: return "MCp";
    case MethodId::HCp: return "HCp";
    case MethodId::MMA: return "MMA";
  }
  return "?";
}

std::optional<MethodId> parse_method_label(const std::string& label) {
  for (MethodId id : all_methods())
    if (method_label(id) == label) return id;
  return std::nullopt;
}

namespace {

std::span<const double> vector_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

MethodFit averaging_fit(MethodId id, CriterionMethod criterion_method,
                        const LossSpec& loss, const Dataset& train,
                        const CandidateSet& set, const PipelineOptions& opts) {
  MethodFit out;
  out.id = id;
  out.is_averaging = true;
  out.bundle = fit_all(train, set, loss, opts.solver);
  const FitBundle& bundle = *out.bundle;

  double c_fixed = 0.0;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::optional<RandomCriterionContext> context;
  switch (criterion_method) {
    case CriterionMethod::Mma:
      c_fixed = 2.0 * bundle.sigma2_hat;
      objective = [&bundle](const Eigen::VectorXd& w) {
        return criterion_mma(bundle, w);
      };
      break;
    case CriterionMethod::MtcFixed: {
      const Eigen::VectorXd& full =
          bundle.residual_matrix.col(bundle.set.largest_index);
      c_fixed = c_rho_fixed(loss, vector_span(full), bundle.n(),
                            bundle.set.largest().k(), opts.bandwidth_fallback);
      objective = [&bundle, &loss, c_fixed](const Eigen::VectorXd& w) {
        return criterion_fixed(bundle, loss, w, c_fixed).value;
      };
      break;
    }
    case CriterionMethod::MtcRandom:
      context.emplace(bundle, loss, opts.bandwidth_fallback);
      objective = [&ctx = *context](const Eigen::VectorXd& w) { return ctx(w); };
      break;
  }

  const SimplexMinimizeResult opt =
      minimize_over_simplex(objective, set.size(), opts.simplex);
  out.weights = opt.weights;
  out.criterion = make_criterion_report(criterion_method, bundle, loss, c_fixed,
                                        opt, opts.bandwidth_fallback);
  return out;
}

MethodFit selection_fit_from_bundle(MethodId id, const LossSpec& loss,
                                    const Dataset& train, const CandidateSet& set,
                                    const PipelineOptions& opts) {
  MethodFit out;
  out.id = id;
  out.is_averaging = false;
  out.bundle = fit_all(train, set, loss, opts.solver);
  const FitBundle& bundle = *out.bundle;
  const Eigen::VectorXd& full = bundle.residual_matrix.col(set.largest_index);
  const double c_fixed = c_rho_fixed(loss, vector_span(full), bundle.n(),
                                     set.largest().k(), opts.bandwidth_fallback);
  out.selection = akaike_type_scores(bundle, loss, c_fixed);
  out.chosen = out.selection.chosen;
  const FitResult& fit = bundle.fits[static_cast<std::size_t>(out.chosen)];
  out.chosen_theta = fit.theta;
  out.chosen_columns = fit.model.columns;
  return out;
}

}  // namespace

MethodFit fit_with_method(MethodId id, const Dataset& train, const CandidateSet& set,
                          const PipelineOptions& opts) {
  switch (id) {
    case MethodId::MMA:
      return averaging_fit(id, CriterionMethod::Mma, LossSpec::square(), train,
                           set, opts);
    case MethodId::MA_A:
      return averaging_fit(id, CriterionMethod::MtcRandom, LossSpec::absolute(),
                           train, set, opts);
    case MethodId::MA_Ac:
      return averaging_fit(id, CriterionMethod::MtcFixed, LossSpec::absolute(),
                           train, set, opts);
    case MethodId::MA_H:
      return averaging_fit(id, CriterionMethod::MtcRandom,
                           LossSpec::huber(opts.huber_c), train, set, opts);
    case MethodId::MA_Hc:
      return averaging_fit(id, CriterionMethod::MtcFixed,
                           LossSpec::huber(opts.huber_c), train, set, opts);
    case MethodId::MS_A:
      return selection_fit_from_bundle(id, LossSpec::absolute(), train, set, opts);
    case MethodId::MS_H:
      return selection_fit_from_bundle(id, LossSpec::huber(opts.huber_c), train,
                                       set, opts);
    case MethodId::WCp: {
      MethodFit out;
      out.id = id;
      out.selection = wcp_scores(train, set, opts.wl);
      out.chosen = out.selection.chosen;
      const CandidateModel& model = set.models[static_cast<std::size_t>(out.chosen)];
      out.chosen_theta = wl_fit(train, model, opts.wl).theta_w;
      out.chosen_columns = model.columns;
      return out;
    }
    case MethodId::HCp:
    case MethodId::MCp: {
      MethodFit out;
      out.id = id;
      const RcpWeighting weighting = id == MethodId::HCp ? RcpWeighting::HuberType
                                                         : RcpWeighting::MallowsType;
      out.selection = rcp_scores(train, set, weighting, opts.huber_c, opts.solver);
      out.chosen = out.selection.chosen;
      const CandidateModel& model = set.models[static_cast<std::size_t>(out.chosen)];
      const FitResult fit =
          id == MethodId::HCp
              ? fit_m_estimator(train, model, LossSpec::huber(opts.huber_c),
                                opts.solver)
              : fit_gm_estimator(train, model, opts.huber_c, opts.solver);
      out.chosen_theta = fit.theta;
      out.chosen_columns = model.columns;
      return out;
    }
  }
  throw Error("unknown method id");
}

Eigen::VectorXd predict(const MethodFit& fit, const Eigen::MatrixXd& new_design) {
  if (fit.is_averaging) return average_predict(*fit.bundle, fit.weights, new_design);
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(new_design.rows());
  for (std::size_t j = 0; j < fit.chosen_columns.size(); ++j) {
    const int col = fit.chosen_columns[j];
    if (col >= new_design.cols())
      throw DimensionMismatchError("new design has too few columns");
    pred += new_design.col(col) * fit.chosen_theta[static_cast<Eigen::Index>(j)];
  }
  return pred;
}

Eigen::VectorXd predict_with_method(MethodId id, const Dataset& train,
                                    const CandidateSet& set,
                                    const Eigen::MatrixXd& new_design,
                                    const PipelineOptions& opts) {
  return predict(fit_with_method(id, train, set, opts), new_design);
}

}  // namespace robavg

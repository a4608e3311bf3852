#include "robavg/regression.hpp"

#include <cmath>

#include "robavg/errors.hpp"
#include "robavg/stats.hpp"

namespace robavg {

void Dataset::validate() const {
  if (design.rows() != response.size())
    throw DimensionMismatchError("design rows != response length");
  if (design.cols() < 1 || design.rows() < design.cols())
    throw DimensionMismatchError("need n >= p >= 1");
  if (!design.allFinite() || !response.allFinite())
    throw DimensionMismatchError("non-finite entry in dataset");
  if (!column_names.empty() &&
      column_names.size() != static_cast<std::size_t>(design.cols()))
    throw DimensionMismatchError("column_names size != p");
}

Dataset with_intercept(const Dataset& data) {
  Dataset out;
  out.design.resize(data.design.rows(), data.design.cols() + 1);
  out.design.col(0).setOnes();
  out.design.rightCols(data.design.cols()) = data.design;
  out.response = data.response;
  if (!data.column_names.empty()) {
    out.column_names.reserve(data.column_names.size() + 1);
    out.column_names.emplace_back("intercept");
    out.column_names.insert(out.column_names.end(), data.column_names.begin(),
                            data.column_names.end());
  }
  return out;
}

namespace {

Eigen::MatrixXd submatrix(const Dataset& data, const CandidateModel& model) {
  Eigen::MatrixXd x(data.n(), model.k());
  for (int j = 0; j < model.k(); ++j) {
    const int col = model.columns[static_cast<std::size_t>(j)];
    if (col < 0 || col >= data.p())
      throw DimensionMismatchError("candidate column out of design bounds");
    x.col(j) = data.design.col(col);
  }
  return x;
}

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         double rank_tol) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(rank_tol);
  if (qr.rank() < x.cols())
    throw RankDeficientError("design submatrix is rank deficient");
  return qr.solve(y);
}

Eigen::VectorXd solve_weighted_ls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, double rank_tol) {
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::VectorXd yw = sw.asDiagonal() * y;
  return solve_ls(xw, yw, rank_tol);
}

double objective_of(const LossSpec& spec, const Eigen::VectorXd& residuals) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i)
    acc += rho(spec, residuals[i]);
  return acc;
}

/// IRLS weight rho1(r)/(2r) with its r -> 0 limit. For the absolute loss the
/// weight is capped at 1/(2*delta) to keep the linear system bounded.
double irls_weight(const LossSpec& spec, double r, double abs_delta) {
  switch (spec.kind) {
    case LossKind::Square:
      return 1.0;
    case LossKind::Huber: {
      const double a = std::abs(r);
      return a <= spec.huber_c ? 1.0 : spec.huber_c / a;
    }
    case LossKind::Absolute: {
      const double a = std::abs(r);
      return 1.0 / (2.0 * std::max(a, abs_delta));
    }
  }
  return 1.0;
}

}  // namespace

FitResult fit_m_estimator(const Dataset& data, const CandidateModel& model,
                          const LossSpec& spec, const SolverOptions& opts) {
  data.validate();
  if (data.n() <= model.k())
    throw DimensionMismatchError("need n > k_m for an M-estimator fit");
  const Eigen::MatrixXd x = submatrix(data, model);
  const Eigen::VectorXd& y = data.response;

  FitResult fit;
  fit.model = model;
  fit.theta = solve_ls(x, y, opts.rank_tol);
  fit.residuals = y - x * fit.theta;
  fit.objective = objective_of(spec, fit.residuals);
  fit.iterations = 0;
  fit.converged = true;
  if (opts.record_trace) fit.objective_trace.push_back(fit.objective);
  if (spec.kind == LossKind::Square) return fit;

  std::vector<double> yv(y.data(), y.data() + y.size());
  const double y_scale = stddev(yv);
  const double abs_delta = 1e-6 * (y_scale > 0.0 ? y_scale : 1.0);

  fit.converged = false;
  Eigen::VectorXd w(data.n());
  for (int it = 1; it <= opts.max_iter; ++it) {
    for (int i = 0; i < data.n(); ++i)
      w[i] = irls_weight(spec, fit.residuals[i], abs_delta);
    const Eigen::VectorXd theta_next = solve_weighted_ls(x, y, w, opts.rank_tol);
    const double step = (theta_next - fit.theta).cwiseAbs().maxCoeff();
    fit.theta = theta_next;
    fit.residuals = y - x * fit.theta;
    fit.objective = objective_of(spec, fit.residuals);
    fit.iterations = it;
    if (opts.record_trace) fit.objective_trace.push_back(fit.objective);
    if (step < opts.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

FitBundle fit_all(const Dataset& data, const CandidateSet& set,
                  const LossSpec& spec, const SolverOptions& opts) {
  FitBundle bundle;
  bundle.set = set;
  bundle.loss = spec;
  bundle.fits.reserve(set.models.size());
  bundle.residual_matrix.resize(data.n(), set.size());
  bundle.model_sizes.resize(set.size());

  for (int m = 0; m < set.size(); ++m) {
    const CandidateModel& model = set.models[static_cast<std::size_t>(m)];
    try {
      bundle.fits.push_back(fit_m_estimator(data, model, spec, opts));
    } catch (const Error& e) {
      throw Error("model " + std::to_string(m) + ": " + e.what());
    }
    bundle.residual_matrix.col(m) = bundle.fits.back().residuals;
    bundle.model_sizes[m] = static_cast<double>(model.k());
  }

  // sigma2_hat always uses squared least-squares residuals of the largest
  // model, independent of the working loss.
  const CandidateModel& largest = set.largest();
  Eigen::VectorXd ls_res;
  if (spec.kind == LossKind::Square) {
    ls_res = bundle.fits[static_cast<std::size_t>(set.largest_index)].residuals;
  } else {
    ls_res = fit_m_estimator(data, largest, LossSpec::square(), opts).residuals;
  }
  const int dof = data.n() - largest.k();
  if (dof <= 0) throw DimensionMismatchError("largest model leaves no dof");
  bundle.sigma2_hat = ls_res.squaredNorm() / static_cast<double>(dof);
  return bundle;
}

}  // namespace robavg

#include "robavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robavg/errors.hpp"

namespace robavg {

void WeightVector::validate(double tol) const {
  for (Eigen::Index m = 0; m < w.size(); ++m)
    if (w[m] < -tol || w[m] > 1.0 + tol)
      throw DimensionMismatchError("weight outside [0,1]");
  if (std::abs(w.sum() - 1.0) > tol)
    throw DimensionMismatchError("weights do not sum to 1");
}

Eigen::VectorXd averaged_residuals(const FitBundle& bundle, const Eigen::VectorXd& w) {
  if (w.size() != bundle.M())
    throw DimensionMismatchError("weight length != number of models");
  return bundle.residual_matrix * w;
}

CriterionBreakdown criterion_fixed(const FitBundle& bundle, const LossSpec& spec,
                                   const Eigen::VectorXd& w, double c_rho) {
  const Eigen::VectorXd r = averaged_residuals(bundle, w);
  CriterionBreakdown out;
  for (Eigen::Index i = 0; i < r.size(); ++i) out.loss_term += rho(spec, r[i]);
  out.penalty_term = c_rho * bundle.model_sizes.dot(w);
  out.value = out.loss_term + out.penalty_term;
  return out;
}

double criterion_mma(const FitBundle& bundle, const Eigen::VectorXd& w) {
  return criterion_fixed(bundle, LossSpec::square(), w, 2.0 * bundle.sigma2_hat).value;
}

RandomCriterionContext::RandomCriterionContext(const FitBundle& bundle,
                                               const LossSpec& spec,
                                               BandwidthFallback fallback)
    : bundle_(&bundle), spec_(spec) {
  const int n = bundle.n();
  const int M = bundle.M();
  rho1_columns_.resize(n, M);
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < n; ++i)
      rho1_columns_(i, m) = rho1(spec, bundle.residual_matrix(i, m));

  curvatures_.resize(M);
  if (spec.kind != LossKind::Square) {
    const Eigen::VectorXd& full =
        bundle.residual_matrix.col(bundle.set.largest_index);
    const std::span<const double> full_span(full.data(),
                                            static_cast<std::size_t>(full.size()));
    for (int m = 0; m < M; ++m) {
      const Eigen::VectorXd& col = bundle.residual_matrix.col(m);
      const std::span<const double> col_span(col.data(),
                                             static_cast<std::size_t>(col.size()));
      curvatures_[m] = average_curvature(spec, col_span, full_span, fallback);
      if (curvatures_[m] <= 0.0)
        throw ZeroCurvatureError("model " + std::to_string(m) +
                                 ": averaged curvature estimate is not positive");
    }
  }
}

CriterionBreakdown RandomCriterionContext::evaluate(const Eigen::VectorXd& w) const {
  const FitBundle& bundle = *bundle_;
  const int n = bundle.n();
  const int M = bundle.M();
  if (w.size() != M)
    throw DimensionMismatchError("weight length != number of models");

  const Eigen::VectorXd r = bundle.residual_matrix * w;
  CriterionBreakdown out;
  for (int i = 0; i < n; ++i) out.loss_term += rho(spec_, r[i]);

  out.per_model_penalties.resize(M);
  if (spec_.kind == LossKind::Square) {
    out.per_model_penalties.setConstant(2.0 * bundle.sigma2_hat);
  } else {
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = rho1(spec_, r[i]);
    const Eigen::VectorXd numer =
        (rho1_columns_.transpose() * s) / static_cast<double>(n);
    out.per_model_penalties = numer.cwiseQuotient(curvatures_);
  }
  out.penalty_term =
      (w.cwiseProduct(bundle.model_sizes)).dot(out.per_model_penalties);
  out.value = out.loss_term + out.penalty_term;
  return out;
}

CriterionBreakdown criterion_random(const FitBundle& bundle, const LossSpec& spec,
                                    const Eigen::VectorXd& w,
                                    BandwidthFallback fallback) {
  return RandomCriterionContext(bundle, spec, fallback).evaluate(w);
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index M = v.size();
  std::vector<double> u(v.data(), v.data() + M);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double tau = 0.0;
  int support = 0;
  for (Eigen::Index j = 0; j < M; ++j) {
    cum += u[static_cast<std::size_t>(j)];
    const double candidate = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) {
      tau = candidate;
      support = static_cast<int>(j + 1);
    }
  }
  (void)support;
  Eigen::VectorXd out(M);
  for (Eigen::Index j = 0; j < M; ++j) out[j] = std::max(v[j] - tau, 0.0);
  return out;
}

namespace {

/// Exact renormalization so the simplex invariants hold bit-for-bit at exit.
void finalize_weights(Eigen::VectorXd& w) {
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = std::max(w[j], 0.0);
  const double s = w.sum();
  if (s <= 0.0) {
    w.setConstant(1.0 / static_cast<double>(w.size()));
  } else {
    w /= s;
  }
}

double checked_eval(const std::function<double(const Eigen::VectorXd&)>& objective,
                    const Eigen::VectorXd& w) {
  const double f = objective(w);
  if (!std::isfinite(f))
    throw NonFiniteObjectiveError("objective not finite at a feasible point");
  return f;
}

struct RestartOutcome {
  Eigen::VectorXd w;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

RestartOutcome run_restart(const std::function<double(const Eigen::VectorXd&)>& objective,
                           Eigen::VectorXd w, const SimplexOptions& opts) {
  const Eigen::Index M = w.size();
  RestartOutcome out;
  double f = checked_eval(objective, w);
  Eigen::VectorXd grad(M), probe(M), w_next(M);
  Eigen::VectorXd prev_w, prev_grad;
  double step = 0.0;

  for (int it = 0; it < opts.max_iter; ++it) {
    // Forward-difference gradient; the criteria are defined off-simplex so
    // the probes need no projection.
    for (Eigen::Index j = 0; j < M; ++j) {
      probe = w;
      probe[j] += opts.fd_step;
      grad[j] = (checked_eval(objective, probe) - f) / opts.fd_step;
    }

    const double residual = (w - project_to_simplex(w - grad)).norm();
    if (residual < opts.tol_scale * (1.0 + std::abs(f))) break;

    // Spectral (Barzilai-Borwein) initial step, then monotone Armijo.
    if (prev_w.size() == M) {
      const Eigen::VectorXd dw = w - prev_w;
      const Eigen::VectorXd dg = grad - prev_grad;
      const double dgg = dg.squaredNorm();
      step = dgg > 0.0 ? std::abs(dw.dot(dg)) / dgg : step;
    }
    if (!(step > 1e-14 && step < 1e14)) step = 1.0 / (1.0 + grad.norm());

    prev_w = w;
    prev_grad = grad;

    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      w_next = project_to_simplex(w - t * grad);
      const double f_next = checked_eval(objective, w_next);
      const double decrease = grad.dot(w_next - w);
      if (f_next <= f + opts.armijo_sigma * decrease && f_next <= f) {
        w = w_next;
        f = f_next;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) break;  // no descent step found at any scale
    step = t;
  }
  out.w = w;
  out.value = f;
  return out;
}

void enumerate_compositions(int slots, int total,
                            std::vector<int>& current,
                            const std::function<void(const std::vector<int>&)>& visit) {
  if (slots == 1) {
    current.push_back(total);
    visit(current);
    current.pop_back();
    return;
  }
  for (int a = 0; a <= total; ++a) {
    current.push_back(a);
    enumerate_compositions(slots - 1, total - a, current, visit);
    current.pop_back();
  }
}

}  // namespace

SimplexMinimizeResult minimize_over_simplex(
    const std::function<double(const Eigen::VectorXd&)>& objective, int M,
    const SimplexOptions& opts) {
  if (M < 1) throw DimensionMismatchError("need at least one model");
  SimplexMinimizeResult best;
  if (M == 1) {
    best.weights = Eigen::VectorXd::Ones(1);
    best.value = checked_eval(objective, best.weights);
    best.restarts_used = 1;
    return best;
  }

  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= M; ++r) {
    Eigen::VectorXd start;
    if (r < M) {
      start = Eigen::VectorXd::Zero(M);
      start[r] = 1.0;
    } else {
      start = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
    }
    RestartOutcome outcome = run_restart(objective, std::move(start), opts);
    best.iterations += outcome.iterations;
    ++best.restarts_used;
    if (outcome.value < best.value) {  // strict: ties keep the earliest restart
      best.value = outcome.value;
      best.weights = outcome.w;
    }
  }

  if (opts.grid_check && M <= 8) {
    const int S = std::max(1, static_cast<int>(std::lround(1.0 / opts.grid_spacing)));
    std::vector<int> current;
    Eigen::VectorXd w(M);
    enumerate_compositions(M, S, current, [&](const std::vector<int>& comp) {
      for (int j = 0; j < M; ++j)
        w[j] = static_cast<double>(comp[static_cast<std::size_t>(j)]) /
               static_cast<double>(S);
      const double f = checked_eval(objective, w);
      if (f < best.value) {
        best.value = f;
        best.weights = w;
        best.grid_point_won = true;
      }
    });
  }

  finalize_weights(best.weights);
  return best;
}

Eigen::VectorXd average_predict(const FitBundle& bundle, const Eigen::VectorXd& w,
                                const Eigen::MatrixXd& new_design) {
  if (w.size() != bundle.M())
    throw DimensionMismatchError("weight length != number of models");
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(new_design.rows());
  for (int m = 0; m < bundle.M(); ++m) {
    if (w[m] == 0.0) continue;
    const CandidateModel& model = bundle.set.models[static_cast<std::size_t>(m)];
    const Eigen::VectorXd& theta = bundle.fits[static_cast<std::size_t>(m)].theta;
    Eigen::VectorXd part = Eigen::VectorXd::Zero(new_design.rows());
    for (int j = 0; j < model.k(); ++j) {
      const int col = model.columns[static_cast<std::size_t>(j)];
      if (col >= new_design.cols())
        throw DimensionMismatchError("new design has too few columns");
      part += new_design.col(col) * theta[j];
    }
    pred += w[m] * part;
  }
  return pred;
}

CriterionReport make_criterion_report(CriterionMethod method, const FitBundle& bundle,
                                      const LossSpec& spec, double c_rho_fixed_value,
                                      const SimplexMinimizeResult& opt,
                                      BandwidthFallback fallback) {
  CriterionReport report;
  report.method = method;
  report.loss = spec;
  report.weights.w = opt.weights;
  report.optimizer_iterations = opt.iterations;
  report.restarts_used = opt.restarts_used;
  CriterionBreakdown breakdown;
  switch (method) {
    case CriterionMethod::MtcFixed:
      breakdown = criterion_fixed(bundle, spec, opt.weights, c_rho_fixed_value);
      break;
    case CriterionMethod::MtcRandom:
      breakdown = criterion_random(bundle, spec, opt.weights, fallback);
      break;
    case CriterionMethod::Mma:
      breakdown = criterion_fixed(bundle, LossSpec::square(), opt.weights,
                                  2.0 * bundle.sigma2_hat);
      break;
  }
  report.criterion_value = breakdown.value;
  report.loss_term = breakdown.loss_term;
  report.penalty_term = breakdown.penalty_term;
  return report;
}

}  // namespace robavg

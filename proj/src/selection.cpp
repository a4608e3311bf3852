#include "robavg/selection.hpp"

#include <cmath>
#include <limits>

#include "robavg/errors.hpp"
#include "robavg/stats.hpp"

namespace robavg {

namespace {

Eigen::MatrixXd submatrix(const Dataset& data, const CandidateModel& model) {
  Eigen::MatrixXd x(data.n(), model.k());
  for (int j = 0; j < model.k(); ++j)
    x.col(j) = data.design.col(model.columns[static_cast<std::size_t>(j)]);
  return x;
}

Eigen::VectorXd solve_weighted_ls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w, double rank_tol) {
  const Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * x);
  qr.setThreshold(rank_tol);
  if (qr.rank() < x.cols())
    throw RankDeficientError("weighted design is rank deficient");
  return qr.solve(sw.asDiagonal() * y);
}

double huber_psi(double r, double c) { return std::clamp(r, -c, c); }

/// psi(r)/r with the limit value 1 at r = 0.
double huber_psi_over_r(double r, double c) {
  const double a = std::abs(r);
  return a <= c ? 1.0 : c / a;
}

/// Leverage factors v(x_i) = min(1, kappa/||x_i||^2), kappa = median ||x||^2.
Eigen::VectorXd mallows_leverage(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) norms[static_cast<std::size_t>(i)] = x.row(i).squaredNorm();
  const double kappa = median(norms);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double nx = norms[static_cast<std::size_t>(i)];
    v[i] = nx > 0.0 ? std::min(1.0, kappa / nx) : 1.0;
  }
  return v;
}

/// GM / M estimator solving sum_i v_i psi(r_i) x_i = 0 by IRLS from the
/// least-squares start. v == ones gives the plain Huber M estimator.
FitResult fit_weighted_m(const Dataset& data, const CandidateModel& model,
                         const Eigen::VectorXd& v, double c,
                         const SolverOptions& opts) {
  const Eigen::MatrixXd x = submatrix(data, model);
  const Eigen::VectorXd& y = data.response;
  const LossSpec huber = LossSpec::huber(c);

  FitResult fit;
  fit.model = model;
  fit.theta = solve_weighted_ls(x, y, Eigen::VectorXd::Ones(data.n()), opts.rank_tol);
  fit.residuals = y - x * fit.theta;
  fit.converged = false;
  Eigen::VectorXd w(data.n());
  for (int it = 1; it <= opts.max_iter; ++it) {
    for (int i = 0; i < data.n(); ++i)
      w[i] = v[i] * huber_psi_over_r(fit.residuals[i], c);
    const Eigen::VectorXd theta_next = solve_weighted_ls(x, y, w, opts.rank_tol);
    const double step = (theta_next - fit.theta).cwiseAbs().maxCoeff();
    fit.theta = theta_next;
    fit.residuals = y - x * fit.theta;
    fit.iterations = it;
    if (step < opts.tol) {
      fit.converged = true;
      break;
    }
  }
  fit.objective = 0.0;
  for (int i = 0; i < data.n(); ++i) fit.objective += rho(huber, fit.residuals[i]);
  return fit;
}

struct RcpConstants {
  double u_minus_v = 0.0;
  double v = 0.0;
};

/// Sample-moment estimates of the RCp expectation constants for one model,
/// evaluated at the full-model residuals eps_full.
RcpConstants rcp_constants(const Eigen::MatrixXd& x, const Eigen::VectorXd& v,
                           const Eigen::VectorXd& eps_full, double c) {
  const int n = static_cast<int>(x.rows());

  Eigen::VectorXd s_norm(n), s_q(n), s_n(n), s_l(n), s_r(n);
  double eta_norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = eps_full[i];
    const double psi = huber_psi(e, c);
    const double dpsi = std::abs(e) <= c ? 1.0 : 0.0;
    const double por = huber_psi_over_r(e, c);  // psi(e)/e with limit 1
    const double vi = v[i];
    eta_norm2 += vi * vi * psi * psi;
    s_norm[i] = vi * dpsi;                        // normalizer integrand
    s_q[i] = vi * vi * psi * psi;                 // Q
    s_n[i] = vi * vi * vi * psi * psi * dpsi;     // N = E(eta^2 eta' xx^T)
    s_l[i] = vi * vi * (dpsi * dpsi + 2.0 * dpsi * por - 3.0 * por * por);  // L
    s_r[i] = vi * vi * por * por;                 // R
  }

  auto weighted_gram = [&](const Eigen::VectorXd& s) {
    return Eigen::MatrixXd(x.transpose() * s.asDiagonal() * x);
  };

  const Eigen::MatrixXd normalizer = weighted_gram(s_norm);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normalizer);
  if (!lu.isInvertible())
    throw SingularNormalizerError("estimated normalizing matrix is singular");
  const Eigen::MatrixXd norm_inv = lu.inverse();

  const Eigen::MatrixXd q = weighted_gram(s_q);
  const Eigen::MatrixXd nn = weighted_gram(s_n);
  const Eigen::MatrixXd l = weighted_gram(s_l);
  const Eigen::MatrixXd r = weighted_gram(s_r);
  const Eigen::MatrixXd qi = norm_inv * q * norm_inv;

  RcpConstants out;
  out.u_minus_v = eta_norm2 - 2.0 * (nn * norm_inv).trace() + (l * qi).trace();
  out.v = (r * qi).trace();
  return out;
}

int argmin_index(const Eigen::VectorXd& scores) {
  int best = 0;
  for (int m = 1; m < scores.size(); ++m)
    if (scores[m] < scores[best]) best = m;
  return best;
}

}  // namespace

FitResult fit_gm_estimator(const Dataset& data, const CandidateModel& model,
                           double huber_c, const SolverOptions& opts) {
  const Eigen::MatrixXd x = submatrix(data, model);
  return fit_weighted_m(data, model, mallows_leverage(x), huber_c, opts);
}

RcpDetail rcp_scores_detailed(const Dataset& data, const CandidateSet& set,
                              RcpWeighting weighting, double huber_c,
                              const SolverOptions& opts) {
  data.validate();
  const int M = set.size();
  const bool mallows = weighting == RcpWeighting::MallowsType;

  // Full-model fit provides the residuals for every expectation estimate.
  const CandidateModel& largest = set.largest();
  const Eigen::MatrixXd x_full = submatrix(data, largest);
  const Eigen::VectorXd v_full =
      mallows ? mallows_leverage(x_full) : Eigen::VectorXd::Ones(data.n());
  const FitResult full_fit = fit_weighted_m(data, largest, v_full, huber_c, opts);
  const Eigen::VectorXd& eps_full = full_fit.residuals;

  RcpDetail detail;
  detail.weighted_rss.resize(M);
  detail.u_minus_v.resize(M);
  detail.v.resize(M);
  for (int m = 0; m < M; ++m) {
    const CandidateModel& model = set.models[static_cast<std::size_t>(m)];
    const Eigen::MatrixXd x = submatrix(data, model);
    const Eigen::VectorXd v =
        mallows ? mallows_leverage(x) : Eigen::VectorXd::Ones(data.n());
    const FitResult fit = m == set.largest_index
                              ? full_fit
                              : fit_weighted_m(data, model, v, huber_c, opts);
    double wm = 0.0;
    for (int i = 0; i < data.n(); ++i) {
      const double psi = huber_psi(fit.residuals[i], huber_c);
      wm += v[i] * v[i] * psi * psi;  // (v psi(r)/r)^2 r^2
    }
    detail.weighted_rss[m] = wm;
    const RcpConstants constants = rcp_constants(x, v, eps_full, huber_c);
    detail.u_minus_v[m] = constants.u_minus_v;
    detail.v[m] = constants.v;
  }

  const double u_full =
      detail.u_minus_v[set.largest_index] + detail.v[set.largest_index];
  if (u_full <= 0.0)
    throw SingularNormalizerError("nonpositive U_M; scale estimate undefined");
  detail.sigma_tilde2 = detail.weighted_rss[set.largest_index] / u_full;

  SelectionReport& report = detail.report;
  report.method = mallows ? SelectionMethod::MCp : SelectionMethod::HCp;
  report.scores.resize(M);
  report.auxiliary = detail.v;
  for (int m = 0; m < M; ++m)
    report.scores[m] = detail.weighted_rss[m] / detail.sigma_tilde2 - detail.u_minus_v[m];

  // Prefer RC_p closest to V_m among models with RC_p <= V_m; otherwise the
  // global argmin of RC_p - V_m.
  int chosen = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    if (report.scores[m] <= detail.v[m]) {
      const double gap = std::abs(report.scores[m] - detail.v[m]);
      if (gap < best_gap) {
        best_gap = gap;
        chosen = m;
      }
    }
  }
  if (chosen < 0) chosen = argmin_index(report.scores - detail.v);
  report.chosen = chosen;
  return detail;
}

SelectionReport rcp_scores(const Dataset& data, const CandidateSet& set,
                           RcpWeighting weighting, double huber_c,
                           const SolverOptions& opts) {
  return rcp_scores_detailed(data, set, weighting, huber_c, opts).report;
}

SelectionReport akaike_type_scores(const FitBundle& bundle, const LossSpec& spec,
                                   double c_rho) {
  SelectionReport report;
  report.method =
      spec.kind == LossKind::Absolute ? SelectionMethod::MS_A : SelectionMethod::MS_H;
  report.scores.resize(bundle.M());
  for (int m = 0; m < bundle.M(); ++m) {
    double obj = 0.0;
    for (int i = 0; i < bundle.n(); ++i)
      obj += rho(spec, bundle.residual_matrix(i, m));
    report.scores[m] = obj + c_rho * bundle.model_sizes[m];
  }
  report.chosen = argmin_index(report.scores);
  return report;
}

namespace {

double gauss_pdf(double x, double variance) {
  return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * M_PI * variance);
}

/// Pearson residuals and phi weights for residual vector z under a normal
/// working model with variance sigma2; kernel variance h.
void pearson_phi(const Eigen::VectorXd& z, double sigma2, double h,
                 Eigen::VectorXd& delta, Eigen::VectorXd& phi) {
  const int n = static_cast<int>(z.size());
  delta.resize(n);
  phi.resize(n);
  for (int i = 0; i < n; ++i) {
    double femp = 0.0;
    for (int j = 0; j < n; ++j) femp += gauss_pdf(z[i] - z[j], h);
    femp /= static_cast<double>(n);
    const double fmod = gauss_pdf(z[i], sigma2 + h);
    const double d = femp / fmod - 1.0;
    delta[i] = d;
    const double raf = 2.0 * (std::sqrt(d + 1.0) - 1.0);  // Hellinger RAF
    phi[i] = std::min(1.0, std::max(raf + 1.0, 0.0) / (d + 1.0));
  }
}

}  // namespace

WLWeights wl_fit(const Dataset& data, const CandidateModel& model,
                 const WlOptions& opts) {
  data.validate();
  const Eigen::MatrixXd x = submatrix(data, model);
  const Eigen::VectorXd& y = data.response;
  const int n = data.n();

  WLWeights out;
  out.theta_w = solve_weighted_ls(x, y, Eigen::VectorXd::Ones(n), 1e-10);
  Eigen::VectorXd z = y - x * out.theta_w;
  double sigma2 = z.squaredNorm() / static_cast<double>(n - model.k());
  out.converged = false;

  Eigen::VectorXd delta, phi;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const double h = opts.h_factor * sigma2;
    pearson_phi(z, sigma2, h, delta, phi);
    if (phi.sum() <= 0.0) break;  // every point rejected; keep last iterate

    Eigen::VectorXd theta_next;
    try {
      theta_next = solve_weighted_ls(x, y, phi, 1e-10);
    } catch (const RankDeficientError&) {
      break;
    }
    z = y - x * theta_next;
    const double sigma2_next = phi.dot(z.cwiseAbs2()) / phi.sum();
    const double step = std::max((theta_next - out.theta_w).cwiseAbs().maxCoeff(),
                                 std::abs(sigma2_next - sigma2));
    out.theta_w = theta_next;
    sigma2 = sigma2_next;
    out.iterations = it;
    if (step < opts.tol) {
      out.converged = true;
      break;
    }
  }
  // Weights at the terminal parameters.
  pearson_phi(z, sigma2, opts.h_factor * sigma2, delta, phi);
  out.pearson = delta;
  out.phi = phi;
  out.sigma_w = std::sqrt(sigma2);
  return out;
}

double wcp_score_from(const Eigen::VectorXd& phi, const Eigen::VectorXd& z_own,
                      double sigma2, int k_m) {
  if (phi.size() != z_own.size())
    throw LengthMismatchError("phi and residual lengths differ");
  return phi.dot(z_own.cwiseAbs2()) / sigma2 - phi.sum() + 2.0 * k_m;
}

SelectionReport wcp_scores(const Dataset& data, const CandidateSet& set,
                           const WlOptions& opts) {
  data.validate();
  const int M = set.size();
  const CandidateModel& largest = set.largest();

  const WLWeights anchor = wl_fit(data, largest, opts);
  const double sigma2 = anchor.sigma_w * anchor.sigma_w;
  const double h = opts.h_factor * sigma2;

  // Position of each design column inside the largest model's coefficients.
  std::vector<int> position(static_cast<std::size_t>(data.p()), -1);
  for (int j = 0; j < largest.k(); ++j)
    position[static_cast<std::size_t>(largest.columns[static_cast<std::size_t>(j)])] = j;

  SelectionReport report;
  report.method = SelectionMethod::WCp;
  report.scores.resize(M);
  Eigen::VectorXd delta, phi;
  for (int m = 0; m < M; ++m) {
    const CandidateModel& model = set.models[static_cast<std::size_t>(m)];
    const Eigen::MatrixXd x = submatrix(data, model);

    // Anchor coefficients restricted to this model's columns.
    Eigen::VectorXd theta_star(model.k());
    for (int j = 0; j < model.k(); ++j) {
      const int pos = position[static_cast<std::size_t>(
          model.columns[static_cast<std::size_t>(j)])];
      if (pos < 0) throw DimensionMismatchError("column missing from largest model");
      theta_star[j] = anchor.theta_w[pos];
    }
    const Eigen::VectorXd z_star = data.response - x * theta_star;
    pearson_phi(z_star, sigma2, h, delta, phi);

    const WLWeights own = m == set.largest_index ? anchor : wl_fit(data, model, opts);
    const Eigen::VectorXd z_own = data.response - x * own.theta_w;
    report.scores[m] = wcp_score_from(phi, z_own, sigma2, model.k());
  }
  report.chosen = argmin_index(report.scores);
  return report;
}

}  // namespace robavg

#include "robavg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "robavg/errors.hpp"
#include "robavg/parallel.hpp"
#include "robavg/rng.hpp"

namespace robavg {

namespace {

Eigen::VectorXd setting_a_theta() {
  Eigen::VectorXd theta(6);
  theta << 1.0, 0.1, 0.0, 0.0, 0.5, 0.0;
  return theta;
}

}  // namespace

double calibrate_nu(const Eigen::VectorXd& theta, double r_squared,
                    double error_variance) {
  if (!(r_squared > 0.0 && r_squared < 1.0))
    throw DimensionMismatchError("r_squared must lie in (0,1)");
  // Uniform(-5,5) covariates have variance 25/3; the intercept adds none.
  double signal_var = 0.0;
  for (Eigen::Index j = 1; j < theta.size(); ++j)
    signal_var += theta[j] * theta[j];
  signal_var *= 25.0 / 3.0;
  if (signal_var <= 0.0) throw DimensionMismatchError("theta has no slope signal");
  return std::sqrt(error_variance * r_squared / ((1.0 - r_squared) * signal_var));
}

double contaminated_error_variance(ContamCase contam_case, double fraction) {
  switch (contam_case) {
    case ContamCase::Clean:
      return 1.0;
    case ContamCase::VarianceContam:
      return (1.0 - fraction) * 1.0 + fraction * 625.0;
    case ContamCase::MeanContam:
      // mixture of N(0,1) and N(30,1)
      return 1.0 + fraction * (1.0 - fraction) * 900.0;
  }
  return 1.0;
}

std::pair<Dataset, Dataset> generate_setting_a(const SettingAConfig& cfg) {
  const Eigen::VectorXd theta = setting_a_theta();
  const double error_variance =
      cfg.mixture_variance_calibration
          ? contaminated_error_variance(cfg.contam_case, cfg.contam_fraction)
          : 1.0;
  const double nu = calibrate_nu(theta, cfg.r_squared, error_variance);

  Rng rng(cfg.seed);
  const int n = cfg.n;
  auto draw_design = [&](int rows) {
    Eigen::MatrixXd x(rows, 6);
    for (int i = 0; i < rows; ++i) {
      x(i, 0) = 1.0;
      for (int j = 1; j < 6; ++j) x(i, j) = rng.uniform(-5.0, 5.0);
    }
    return x;
  };

  Dataset train;
  train.design = draw_design(n);

  // Contaminated positions: round(fraction*n) distinct rows.
  int n_contam = 0;
  if (cfg.contam_case != ContamCase::Clean)
    n_contam = static_cast<int>(std::lround(cfg.contam_fraction * n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n_contam; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<bool> contaminated(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n_contam; ++i)
    contaminated[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

  train.response.resize(n);
  for (int i = 0; i < n; ++i) {
    double eps;
    if (contaminated[static_cast<std::size_t>(i)]) {
      eps = cfg.contam_case == ContamCase::VarianceContam ? rng.normal(0.0, 25.0)
                                                          : rng.normal(30.0, 1.0);
    } else {
      eps = rng.normal();
    }
    train.response[i] = nu * train.design.row(i).dot(theta) + eps;
  }

  // Out-of-sample rows are always clean.
  Dataset test;
  test.design = draw_design(n);
  test.response.resize(n);
  for (int i = 0; i < n; ++i)
    test.response[i] = nu * test.design.row(i).dot(theta) + rng.normal();
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> generate_setting_b(const SettingBConfig& cfg) {
  constexpr int n = 20;
  Rng rng(cfg.seed);
  auto draw = [&](Dataset& data) {
    data.design.resize(n, 3);
    data.response.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) data.design(i, j) = rng.uniform(-1.0, 1.0);
      data.response[i] =
          data.design(i, 0) + data.design(i, 1) + rng.normal(0.0, cfg.sigma);
    }
  };
  Dataset train, test;
  draw(train);
  if (cfg.with_gross_error) train.response[n - 1] = 10.0;
  draw(test);
  return {std::move(train), std::move(test)};
}

namespace {

ReplicationTable run_generic(
    const std::function<std::pair<Dataset, Dataset>(std::uint64_t)>& generate,
    const CandidateSet& set, const std::vector<MethodId>& methods, int R,
    std::uint64_t base_seed, const PipelineOptions& opts, int threads) {
  if (R < 1) throw DimensionMismatchError("need R >= 1 replications");
  const int n_methods = static_cast<int>(methods.size());
  std::vector<std::vector<double>> pe(
      static_cast<std::size_t>(n_methods),
      std::vector<double>(static_cast<std::size_t>(R),
                          std::numeric_limits<double>::quiet_NaN()));
  std::vector<bool> failed(static_cast<std::size_t>(R), false);

  parallel_for(
      R,
      [&](int idx) {
        const int r = idx + 1;
        const auto [train, test] = generate(derive_seed(base_seed, static_cast<std::uint64_t>(r)));
        for (int mi = 0; mi < n_methods; ++mi) {
          try {
            const Eigen::VectorXd pred = predict_with_method(
                methods[static_cast<std::size_t>(mi)], train, set, test.design, opts);
            pe[static_cast<std::size_t>(mi)][static_cast<std::size_t>(idx)] =
                prediction_error(test.response, pred);
          } catch (const Error&) {
            failed[static_cast<std::size_t>(idx)] = true;
          }
        }
      },
      threads);

  ReplicationTable table;
  table.methods = methods;
  table.R = R;
  for (int idx = 0; idx < R; ++idx)
    if (failed[static_cast<std::size_t>(idx)])
      table.failed_replications.push_back(idx + 1);

  for (int mi = 0; mi < n_methods; ++mi) {
    std::vector<double> clean;
    clean.reserve(static_cast<std::size_t>(R));
    for (int idx = 0; idx < R; ++idx) {
      const double v = pe[static_cast<std::size_t>(mi)][static_cast<std::size_t>(idx)];
      if (std::isfinite(v)) clean.push_back(v);
    }
    table.reports.push_back(ApeReport::from_pes(
        method_label(methods[static_cast<std::size_t>(mi)]), std::move(clean)));
  }
  return table;
}

}  // namespace

ReplicationTable run_replications_a(SettingAConfig base, const std::vector<MethodId>& methods,
                                    int R, std::uint64_t base_seed,
                                    const PipelineOptions& opts, int threads) {
  const CandidateSet set = all_subsets_with_intercept(5);
  return run_generic(
      [&base](std::uint64_t seed) {
        SettingAConfig cfg = base;
        cfg.seed = seed;
        return generate_setting_a(cfg);
      },
      set, methods, R, base_seed, opts, threads);
}

ReplicationTable run_replications_b(SettingBConfig base, const std::vector<MethodId>& methods,
                                    int R, std::uint64_t base_seed,
                                    const PipelineOptions& opts, int threads) {
  const CandidateSet set = all_nonempty_subsets(3);
  return run_generic(
      [&base](std::uint64_t seed) {
        SettingBConfig cfg = base;
        cfg.seed = seed;
        return generate_setting_b(cfg);
      },
      set, methods, R, base_seed, opts, threads);
}

}  // namespace robavg

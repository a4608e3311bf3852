#include <doctest.h>

#include <cmath>

#include "robavg/rng.hpp"
#include "robavg/simulation.hpp"
#include "robavg/stats.hpp"

using namespace robavg;

namespace {

Eigen::VectorXd setting_a_theta() {
  Eigen::VectorXd theta(6);
  theta << 1.0, 0.1, 0.0, 0.0, 0.5, 0.0;
  return theta;
}

}  // namespace

TEST_CASE("calibrate_nu closed form") {
  const Eigen::VectorXd theta = setting_a_theta();
  // Var(x^T theta) = (25/3)(0.01 + 0.25); nu = sqrt(0.5/(0.5 * that))
  const double var_signal = 25.0 / 3.0 * 0.26;
  const double expected = std::sqrt(1.0 * 0.5 / (0.5 * var_signal));
  CHECK(expected == doctest::Approx(0.6794).epsilon(1e-4));
  CHECK(calibrate_nu(theta, 0.5, 1.0) == doctest::Approx(expected).epsilon(1e-12));

  // nu -> 0 as r2 -> 0+
  CHECK(calibrate_nu(theta, 1e-6, 1.0) < 1e-2);
  CHECK_THROWS(calibrate_nu(theta, 1.2, 1.0));
  CHECK_THROWS(calibrate_nu(theta, 0.0, 1.0));
}

TEST_CASE("calibrate_nu hits the requested R^2 empirically") {
  const Eigen::VectorXd theta = setting_a_theta();
  const double r2 = 0.5;
  const double nu = calibrate_nu(theta, r2, 1.0);
  Rng rng(401);
  const int n = 1000000;
  double sum_mu = 0.0, sum_mu2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double mu = theta[0];
    for (int j = 1; j < 6; ++j) mu += theta[j] * rng.uniform(-5.0, 5.0);
    mu *= nu;
    sum_mu += mu;
    sum_mu2 += mu * mu;
  }
  const double var_mu = sum_mu2 / n - (sum_mu / n) * (sum_mu / n);
  const double sample_r2 = var_mu / (var_mu + 1.0);
  CHECK(std::abs(sample_r2 - r2) < 0.005);
}

TEST_CASE("contaminated mixture variances") {
  CHECK(contaminated_error_variance(ContamCase::VarianceContam, 0.07) ==
        doctest::Approx(44.68));
  CHECK(contaminated_error_variance(ContamCase::Clean, 0.15) == doctest::Approx(1.0));
}

TEST_CASE("setting A clean: unit error variance, clean test set") {
  SettingAConfig cfg;
  cfg.n = 20000;
  cfg.r_squared = 0.5;
  cfg.contam_case = ContamCase::Clean;
  cfg.seed = 11;
  const auto [train, test] = generate_setting_a(cfg);
  CHECK(train.n() == 20000);
  CHECK(train.p() == 6);
  CHECK(test.n() == 20000);

  const Eigen::VectorXd theta = setting_a_theta();
  const double nu = calibrate_nu(theta, 0.5, 1.0);
  auto error_sd = [&](const Dataset& d) {
    std::vector<double> errs(static_cast<std::size_t>(d.n()));
    for (int i = 0; i < d.n(); ++i)
      errs[static_cast<std::size_t>(i)] = d.response[i] - nu * d.design.row(i).dot(theta);
    return stddev(errs);
  };
  CHECK(error_sd(train) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(error_sd(test) == doctest::Approx(1.0).epsilon(0.02));

  // covariates live in (-5,5); intercept column is ones
  CHECK(train.design.col(0).isOnes());
  CHECK(train.design.rightCols(5).maxCoeff() <= 5.0);
  CHECK(train.design.rightCols(5).minCoeff() >= -5.0);
}

TEST_CASE("setting A case 3: exact contaminated count and mean") {
  SettingAConfig cfg;
  cfg.n = 100;
  cfg.r_squared = 0.5;
  cfg.contam_case = ContamCase::MeanContam;
  cfg.contam_fraction = 0.15;
  const Eigen::VectorXd theta = setting_a_theta();
  const double nu = calibrate_nu(theta, 0.5, 1.0);

  double contaminated_sum = 0.0;
  int contaminated_total = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    cfg.seed = seed;
    const auto [train, test] = generate_setting_a(cfg);
    int count = 0;
    for (int i = 0; i < train.n(); ++i) {
      const double err = train.response[i] - nu * train.design.row(i).dot(theta);
      if (err > 25.0) {  // clean N(0,1) essentially never lands here
        ++count;
        contaminated_sum += err;
      }
    }
    CHECK(count == 15);
    contaminated_total += count;
    // the test set never carries the shift
    for (int i = 0; i < test.n(); ++i) {
      const double err = test.response[i] - nu * test.design.row(i).dot(theta);
      CHECK(err < 25.0);
    }
  }
  CHECK(contaminated_sum / contaminated_total == doctest::Approx(30.0).epsilon(0.02));
}

TEST_CASE("setting A case 2: rounding of the contaminated count") {
  SettingAConfig cfg;
  cfg.n = 10;
  cfg.r_squared = 0.3;
  cfg.contam_case = ContamCase::VarianceContam;
  cfg.contam_fraction = 0.07;
  cfg.seed = 3;
  // round(0.07 * 10) = 1 contaminated row; verified through the variance
  // of repeated draws rather than any single realization
  const Eigen::VectorXd theta = setting_a_theta();
  const double nu = calibrate_nu(theta, 0.3, 1.0);
  int big = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    cfg.seed = seed;
    const auto [train, test] = generate_setting_a(cfg);
    for (int i = 0; i < train.n(); ++i) {
      const double err = train.response[i] - nu * train.design.row(i).dot(theta);
      if (std::abs(err) > 6.0) ++big;
      ++total;
    }
  }
  // one in ten rows is N(0,625): |err|>6 happens for ~81% of those rows
  const double frac = static_cast<double>(big) / total;
  CHECK(frac == doctest::Approx(0.1 * 0.81).epsilon(0.15));
}

TEST_CASE("setting B: shapes, gross error, slope recovery") {
  SettingBConfig cfg;
  cfg.sigma = 0.3;
  cfg.seed = 77;
  cfg.with_gross_error = false;
  const auto [train_clean, test_clean] = generate_setting_b(cfg);
  CHECK(train_clean.n() == 20);
  CHECK(train_clean.p() == 3);

  cfg.with_gross_error = true;
  const auto [train_gross, test_gross] = generate_setting_b(cfg);
  // identical draws except y_20
  for (int i = 0; i < 19; ++i)
    CHECK(train_gross.response[i] == train_clean.response[i]);
  CHECK(train_gross.response[19] == 10.0);
  CHECK(train_clean.response[19] != 10.0);

  // pooled least squares over many repetitions recovers slopes (1, 1, 0)
  Eigen::MatrixXd big_x(20 * 200, 3);
  Eigen::VectorXd big_y(20 * 200);
  for (int rep = 0; rep < 200; ++rep) {
    SettingBConfig c;
    c.sigma = 1.0;
    c.seed = 1000 + static_cast<std::uint64_t>(rep);
    const auto [train, test] = generate_setting_b(c);
    big_x.middleRows(20 * rep, 20) = train.design;
    big_y.segment(20 * rep, 20) = train.response;
  }
  const Eigen::VectorXd slopes =
      (big_x.transpose() * big_x).ldlt().solve(big_x.transpose() * big_y);
  CHECK(slopes[0] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(slopes[1] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(slopes[2]) < 0.05);
}

TEST_CASE("run_replications: determinism and common realizations") {
  SettingBConfig cfg;
  cfg.sigma = 1.0;
  const std::vector<MethodId> methods = {MethodId::MMA, MethodId::MS_H};
  const ReplicationTable a = run_replications_b(cfg, methods, 5, 42);
  const ReplicationTable b = run_replications_b(cfg, methods, 5, 42);
  REQUIRE(a.reports.size() == 2);
  CHECK(a.failed_replications.empty());
  for (std::size_t mi = 0; mi < a.reports.size(); ++mi) {
    REQUIRE(a.reports[mi].per_replication_pe.size() == 5);
    for (std::size_t r = 0; r < 5; ++r)
      CHECK(a.reports[mi].per_replication_pe[r] ==
            b.reports[mi].per_replication_pe[r]);
  }
  // different base seed produces different draws
  const ReplicationTable c = run_replications_b(cfg, methods, 5, 43);
  bool any_diff = false;
  for (std::size_t r = 0; r < 5; ++r)
    if (c.reports[0].per_replication_pe[r] != a.reports[0].per_replication_pe[r])
      any_diff = true;
  CHECK(any_diff);
  // APEs are positive and finite
  for (const auto& report : a.reports) {
    CHECK(report.ape > 0.0);
    CHECK(std::isfinite(report.ape));
    CHECK(std::isfinite(report.se));
  }
}

TEST_CASE("run_replications A smoke test with a couple of methods") {
  SettingAConfig cfg;
  cfg.n = 50;
  cfg.r_squared = 0.5;
  cfg.contam_case = ContamCase::Clean;
  const ReplicationTable table =
      run_replications_a(cfg, {MethodId::MMA, MethodId::MS_A}, 3, 7);
  CHECK(table.failed_replications.empty());
  for (const auto& report : table.reports) {
    CHECK(report.n_eval == 3);
    CHECK(report.ape > 0.0);
  }
}

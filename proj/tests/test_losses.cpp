#include <doctest.h>

#include <cmath>
#include <vector>

#include "robavg/errors.hpp"
#include "robavg/losses.hpp"
#include "robavg/rng.hpp"

using namespace robavg;

namespace {
const LossSpec kSquare = LossSpec::square();
const LossSpec kAbs = LossSpec::absolute();
const LossSpec kHuber = LossSpec::huber(1.345);
const std::vector<LossSpec> kAllLosses = {kSquare, kAbs, kHuber};
}  // namespace

TEST_CASE("rho closed forms") {
  CHECK(rho(kHuber, 0.0) == 0.0);
  // 2*1.345*2 - 1.345^2, evaluated directly
  CHECK(rho(kHuber, 2.0) == doctest::Approx(3.570975).epsilon(1e-12));
  CHECK(rho(kAbs, -3.0) == 3.0);
  CHECK(rho(kSquare, -2.5) == doctest::Approx(6.25));
  // inside the Huber knee the square branch applies exactly
  CHECK(rho(kHuber, 1.2) == rho(kSquare, 1.2));
  CHECK(rho(kHuber, -1.345) == rho(kSquare, 1.345));
}

TEST_CASE("rho1 closed forms and sign convention") {
  CHECK(rho1(kSquare, 1.5) == 3.0);
  CHECK(rho1(kHuber, -4.0) == doctest::Approx(-2.69));
  CHECK(rho1(kHuber, 4.0) == doctest::Approx(2.69));
  CHECK(rho1(kAbs, 0.0) == 1.0);  // t >= 0 branch
  CHECK(rho1(kAbs, -1e-12) == -1.0);
  CHECK(rho1(kHuber, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("rho is nonnegative, zero at zero, convex on a grid") {
  Rng rng(7);
  for (const auto& spec : kAllLosses) {
    CHECK(rho(spec, 0.0) == 0.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double a = rng.uniform(-6.0, 6.0);
      const double b = rng.uniform(-6.0, 6.0);
      const double lam = rng.unit();
      CHECK(rho(spec, a) >= 0.0);
      const double lhs = rho(spec, lam * a + (1.0 - lam) * b);
      const double rhs = lam * rho(spec, a) + (1.0 - lam) * rho(spec, b);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("rho1 equals the central difference away from kinks") {
  const double h = 1e-5;
  Rng rng(11);
  for (const auto& spec : kAllLosses) {
    for (int trial = 0; trial < 200; ++trial) {
      double t = rng.uniform(-5.0, 5.0);
      if (spec.kind == LossKind::Absolute && std::abs(t) < 1e-3) continue;
      if (spec.kind == LossKind::Huber &&
          std::abs(std::abs(t) - spec.huber_c) < 1e-3)
        continue;
      const double fd = (rho(spec, t + h) - rho(spec, t - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(rho1(spec, t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("Huber limit laws") {
  // matches the square loss inside the knee
  for (double t = -1.345; t <= 1.345; t += 0.1)
    CHECK(rho(kHuber, t) == rho(kSquare, t));
  // rho_huber(t)/(2c) -> |t| as c -> 0+
  const double c = 1e-4;
  const LossSpec tiny = LossSpec::huber(c);
  for (double t : {1.0, -1.0, 2.5}) {
    const double ratio = rho(tiny, t) / (2.0 * c);
    CHECK(std::abs(ratio - std::abs(t)) / std::abs(t) < 1e-3);
  }
}

TEST_CASE("epanechnikov density: hand-computed value") {
  // type-7 quartiles of {-1,0,1}: Q1=-0.5, Q3=0.5, h=0.5
  const std::vector<double> res = {-1.0, 0.0, 1.0};
  CHECK(semi_interquartile_range(res) == doctest::Approx(0.5));
  CHECK(epanechnikov_density(res, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("epanechnikov density: degenerate bandwidth") {
  const std::vector<double> res = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(epanechnikov_density(res, 0.0), DegenerateBandwidthError);
  // opt-in fallback replaces the bandwidth by Silverman's rule
  const std::vector<double> res2 = {1.0, 1.0, 1.0, 1.0, 5.0};
  CHECK_THROWS_AS(epanechnikov_density(res2, 1.0), DegenerateBandwidthError);
  CHECK(epanechnikov_density(res2, 1.0, BandwidthFallback::SilvermanRule) > 0.0);
}

TEST_CASE("epanechnikov density: KDE consistency at the normal mode") {
  Rng rng(1234);
  std::vector<double> res(10000);
  for (auto& r : res) r = rng.normal();
  const double phi0 = 1.0 / std::sqrt(2.0 * M_PI);
  CHECK(std::abs(epanechnikov_density(res, 0.0) - phi0) < 0.03);
}

TEST_CASE("epanechnikov density integrates to one") {
  Rng rng(99);
  std::vector<double> res(500);
  for (auto& r : res) r = rng.uniform(-2.0, 3.0);
  EpanechnikovKde kde(res);
  // trapezoid over the support, padded by the bandwidth
  double lo = res[0], hi = res[0];
  for (double r : res) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  lo -= kde.bandwidth();
  hi += kde.bandwidth();
  const int grid = 4000;
  double integral = 0.0;
  double prev = kde(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double cur = kde(x);
    integral += 0.5 * (prev + cur) * (hi - lo) / grid;
    prev = cur;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("epanechnikov profile carries grid values") {
  const std::vector<double> res = {-1.0, 0.0, 1.0};
  const std::vector<double> grid = {-1.0, 0.0, 1.0};
  const DensityEstimate prof = epanechnikov_profile(res, grid);
  CHECK(prof.bandwidth == doctest::Approx(0.5));
  REQUIRE(prof.values.size() == 3);
  CHECK(prof.values[1] == doctest::Approx(0.5));
  for (double v : prof.values) CHECK(v >= 0.0);
}

TEST_CASE("c_rho_fixed: square") {
  const std::vector<double> res = {1.0, -1.0, 1.0, -1.0};
  CHECK(c_rho_fixed(kSquare, res, 4, 2) == doctest::Approx(4.0));
  // equals 2*rss/(n-k) exactly
  Rng rng(5);
  std::vector<double> r(30);
  double rss = 0.0;
  for (auto& x : r) {
    x = rng.normal();
    rss += x * x;
  }
  CHECK(c_rho_fixed(kSquare, r, 30, 6) == doctest::Approx(2.0 * rss / 24.0).epsilon(1e-15));
}

TEST_CASE("c_rho_fixed: huber displayed formula") {
  const std::vector<double> res = {0.5, -0.5, 10.0};
  // (2*(0.25+0.25) + 2*1.345^2*1) / 2
  const double expected = (2.0 * 0.5 + 2.0 * 1.345 * 1.345) / 2.0;
  CHECK(expected == doctest::Approx(2.309025));
  CHECK(c_rho_fixed(kHuber, res, 3, 1) == doctest::Approx(expected).epsilon(1e-12));

  const std::vector<double> far = {5.0, 6.0, 7.0};
  CHECK_THROWS_AS(c_rho_fixed(kHuber, far, 3, 1), EmptyAcceptRegionError);
}

TEST_CASE("c_rho_fixed: absolute uses 1/(2 f(0))") {
  const std::vector<double> res = {-1.0, 0.0, 1.0};
  CHECK(c_rho_fixed(kAbs, res, 3, 1) == doctest::Approx(1.0 / (2.0 * 0.5)));
}

TEST_CASE("c_rho_m_random: square returns 2 sigma2") {
  const std::vector<double> any = {0.3, -0.2, 0.4};
  CHECK(c_rho_m_random(kSquare, any, any, any, 1.0) == doctest::Approx(2.0));
  CHECK(c_rho_m_random(kSquare, any, any, any, 2.5) == doctest::Approx(5.0));
}

TEST_CASE("c_rho_m_random: absolute collapses to 1/density-average") {
  // all residuals strictly positive -> rho1 products are 1
  const std::vector<double> res_m = {0.5, 1.0, 1.5, 2.0};
  const std::vector<double> full = {-2.0, -1.0, 1.0, 2.0};
  const double got = c_rho_m_random(kAbs, res_m, res_m, full, 0.0);
  EpanechnikovKde kde(full);
  double davg = 0.0;
  for (double t : res_m) davg += kde(t);
  davg /= 4.0;
  CHECK(got == doctest::Approx(1.0 / davg).epsilon(1e-12));
}

TEST_CASE("c_rho_m_random: huber zero-residual degeneracy gives zero") {
  const std::vector<double> zeros = {0.0, 0.0, 0.0};
  CHECK(c_rho_m_random(kHuber, zeros, zeros, zeros, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("c_rho_m_random: huber indicator average matches direct double sum") {
  Rng rng(42);
  const int n = 40;
  std::vector<double> res_m(n), avg(n), full(n);
  for (int i = 0; i < n; ++i) {
    res_m[i] = rng.normal(0.0, 2.0);
    avg[i] = rng.normal(0.0, 1.5);
    full[i] = rng.normal();
  }
  const double got = c_rho_m_random(kHuber, res_m, avg, full, 0.0);

  // direct evaluation of the displayed estimator
  const double c = 1.345;
  double numer = 0.0;
  for (int i = 0; i < n; ++i) numer += rho1(kHuber, res_m[i]) * rho1(kHuber, avg[i]);
  numer /= n;
  double curv = 0.0;
  for (int i = 0; i < n; ++i) {
    double cnt = 0.0;
    for (int j = 0; j < n; ++j)
      if (std::abs(full[j] + res_m[i]) <= c) cnt += 1.0;
    curv += 2.0 * cnt / n;
  }
  curv /= n;
  CHECK(got == doctest::Approx(numer / curv).epsilon(1e-12));
}

TEST_CASE("c_rho_m_random: zero curvature raises") {
  // model residuals so far from the full-model ones that no indicator fires
  const std::vector<double> res_m = {100.0, 101.0, 102.0};
  const std::vector<double> avg = {1.0, 1.0, 1.0};
  const std::vector<double> full = {0.1, -0.1, 0.0};
  CHECK_THROWS_AS(c_rho_m_random(LossSpec::huber(0.5), res_m, avg, full, 0.0),
                  ZeroCurvatureError);
}

#include "robavg/losses.hpp"

#include <algorithm>
#include <cmath>

#include "robavg/errors.hpp"
#include "robavg/stats.hpp"

namespace robavg {

double rho(const LossSpec& spec, double t) {
  switch (spec.kind) {
    case LossKind::Square:
      return t * t;
    case LossKind::Absolute:
      return std::abs(t);
    case LossKind::Huber: {
      const double c = spec.huber_c;
      const double a = std::abs(t);
      return a <= c ? t * t : 2.0 * c * a - c * c;
    }
  }
  return 0.0;
}

double rho1(const LossSpec& spec, double t) {
  switch (spec.kind) {
    case LossKind::Square:
      return 2.0 * t;
    case LossKind::Absolute:
      return t >= 0.0 ? 1.0 : -1.0;
    case LossKind::Huber: {
      const double c = spec.huber_c;
      if (t > c) return 2.0 * c;
      if (t < -c) return -2.0 * c;
      return 2.0 * t;
    }
  }
  return 0.0;
}

double semi_interquartile_range(std::span<const double> sample) {
  return 0.5 * (quantile_type7(sample, 0.75) - quantile_type7(sample, 0.25));
}

EpanechnikovKde::EpanechnikovKde(std::span<const double> residuals,
                                 BandwidthFallback fallback)
    : sample_(residuals.begin(), residuals.end()) {
  if (sample_.size() < 2)
    throw LengthMismatchError("kernel density needs at least 2 residuals");
  bandwidth_ = semi_interquartile_range(sample_);
  if (bandwidth_ <= 0.0) {
    if (fallback == BandwidthFallback::Error)
      throw DegenerateBandwidthError(
          "residual interquartile range is zero; bandwidth degenerate");
    const double sd = stddev(sample_);
    bandwidth_ = 1.06 * sd * std::pow(static_cast<double>(sample_.size()), -0.2);
    if (bandwidth_ <= 0.0)
      throw DegenerateBandwidthError("all residuals identical; no usable bandwidth");
  }
}

double EpanechnikovKde::operator()(double at) const {
  const double h = bandwidth_;
  double acc = 0.0;
  for (double r : sample_) {
    const double u = (at - r) / h;
    if (std::abs(u) <= 1.0) acc += 0.75 * (1.0 - u * u);
  }
  return acc / (static_cast<double>(sample_.size()) * h);
}

double epanechnikov_density(std::span<const double> residuals, double at,
                            BandwidthFallback fallback) {
  return EpanechnikovKde(residuals, fallback)(at);
}

DensityEstimate epanechnikov_profile(std::span<const double> residuals,
                                     std::span<const double> eval_points,
                                     BandwidthFallback fallback) {
  EpanechnikovKde kde(residuals, fallback);
  DensityEstimate out;
  out.eval_points.assign(eval_points.begin(), eval_points.end());
  out.bandwidth = kde.bandwidth();
  out.values.reserve(eval_points.size());
  for (double x : eval_points) out.values.push_back(kde(x));
  return out;
}

double c_rho_fixed(const LossSpec& spec, std::span<const double> full_model_residuals,
                   int n, int k_full, BandwidthFallback fallback) {
  switch (spec.kind) {
    case LossKind::Square: {
      double rss = 0.0;
      for (double e : full_model_residuals) rss += e * e;
      return 2.0 * rss / static_cast<double>(n - k_full);
    }
    case LossKind::Absolute: {
      const double f0 = epanechnikov_density(full_model_residuals, 0.0, fallback);
      if (f0 <= 0.0)
        throw ZeroCurvatureError("estimated density at zero is not positive");
      return 1.0 / (2.0 * f0);
    }
    case LossKind::Huber: {
      const double c = spec.huber_c;
      double inside_sq = 0.0;
      int inside = 0, outside = 0;
      for (double e : full_model_residuals) {
        if (std::abs(e) <= c) {
          inside_sq += e * e;
          ++inside;
        } else {
          ++outside;
        }
      }
      if (inside == 0)
        throw EmptyAcceptRegionError(
            "no residual with |e| <= c; Huber penalty constant undefined");
      return (2.0 * inside_sq + 2.0 * c * c * static_cast<double>(outside)) /
             static_cast<double>(inside);
    }
  }
  return 0.0;
}

double average_curvature(const LossSpec& spec, std::span<const double> residuals_m,
                         std::span<const double> full_model_residuals,
                         BandwidthFallback fallback) {
  const auto n = residuals_m.size();
  switch (spec.kind) {
    case LossKind::Square:
      return 2.0;
    case LossKind::Absolute: {
      EpanechnikovKde kde(full_model_residuals, fallback);
      double acc = 0.0;
      for (double t : residuals_m) acc += kde(t);
      return acc / static_cast<double>(n);
    }
    case LossKind::Huber: {
      // R2_hat(t) = (2/nf) * #{ j : |e_j(M) + t| <= c }, counted via a
      // sorted copy of the full-model residuals.
      const double c = spec.huber_c;
      std::vector<double> sorted(full_model_residuals.begin(),
                                 full_model_residuals.end());
      std::sort(sorted.begin(), sorted.end());
      const double nf = static_cast<double>(sorted.size());
      double acc = 0.0;
      for (double t : residuals_m) {
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), -c - t);
        const auto hi = std::upper_bound(sorted.begin(), sorted.end(), c - t);
        acc += 2.0 * static_cast<double>(hi - lo) / nf;
      }
      return acc / static_cast<double>(n);
    }
  }
  return 0.0;
}

double c_rho_m_random(const LossSpec& spec, std::span<const double> residuals_m,
                      std::span<const double> averaged_residuals,
                      std::span<const double> full_model_residuals,
                      double sigma2_hat, BandwidthFallback fallback) {
  if (residuals_m.size() != averaged_residuals.size() ||
      residuals_m.size() != full_model_residuals.size())
    throw LengthMismatchError("residual vectors must share length n");
  if (spec.kind == LossKind::Square) return 2.0 * sigma2_hat;

  const double n = static_cast<double>(residuals_m.size());
  double numer = 0.0;
  for (std::size_t i = 0; i < residuals_m.size(); ++i)
    numer += rho1(spec, residuals_m[i]) * rho1(spec, averaged_residuals[i]);
  numer /= n;

  const double curv = average_curvature(spec, residuals_m, full_model_residuals, fallback);
  if (curv <= 0.0)
    throw ZeroCurvatureError("averaged curvature estimate is not positive");
  return numer / curv;
}

}  // namespace robavg

#ifndef ROBAVG_LOSSES_HPP
#define ROBAVG_LOSSES_HPP

#include <span>
#include <vector>

namespace robavg {

enum class LossKind { Square, Absolute, Huber };

/// A loss function rho together with its tuning constant. rho is convex,
/// nonnegative, and has its unique minimum at 0 for every kind.
struct LossSpec {
  LossKind kind = LossKind::Square;
  double huber_c = 1.345;  // used only when kind == Huber

  static LossSpec square() { return {LossKind::Square, 0.0}; }
  static LossSpec absolute() { return {LossKind::Absolute, 0.0}; }
  static LossSpec huber(double c = 1.345) { return {LossKind::Huber, c}; }
};

/// rho(t): Square -> t^2; Absolute -> |t|;
/// Huber -> t^2 on |t| <= c, else 2c|t| - c^2.
double rho(const LossSpec& spec, double t);

/// Derivative rho1(t). Absolute uses the t >= 0 branch at zero, so
/// rho1(0) = +1. Huber is the clipped form: 2t on |t| <= c, +-2c outside.
double rho1(const LossSpec& spec, double t);

/// How to react to a zero interquartile range when picking the kernel
/// bandwidth. The default raises DegenerateBandwidthError; the fallback
/// substitutes Silverman's rule 1.06 * sd * n^(-1/5).
enum class BandwidthFallback { Error, SilvermanRule };

/// Semi-interquartile range (Q3 - Q1)/2 with type-7 quantiles.
double semi_interquartile_range(std::span<const double> sample);

/// Epanechnikov kernel density estimate built once from a residual sample;
/// bandwidth is the semi-interquartile range of the sample.
class EpanechnikovKde {
 public:
  explicit EpanechnikovKde(std::span<const double> residuals,
                           BandwidthFallback fallback = BandwidthFallback::Error);

  double operator()(double at) const;
  double bandwidth() const { return bandwidth_; }

 private:
  std::vector<double> sample_;
  double bandwidth_ = 0.0;
};

/// Single-point convenience wrapper around EpanechnikovKde.
double epanechnikov_density(std::span<const double> residuals, double at,
                            BandwidthFallback fallback = BandwidthFallback::Error);

/// Density profile over a fixed grid, mostly for diagnostics and checks.
struct DensityEstimate {
  std::vector<double> eval_points;
  double bandwidth = 0.0;
  std::vector<double> values;
};

DensityEstimate epanechnikov_profile(std::span<const double> residuals,
                                     std::span<const double> eval_points,
                                     BandwidthFallback fallback = BandwidthFallback::Error);

/// Fixed-design penalty constant estimate from the largest model's
/// residuals. Square: 2 * rss/(n - k_full). Absolute: 1/(2 f(0)).
/// Huber: (2 sum e^2 1(|e|<=c) + 2c^2 sum 1(|e|>c)) / sum 1(|e|<=c).
double c_rho_fixed(const LossSpec& spec, std::span<const double> full_model_residuals,
                   int n, int k_full,
                   BandwidthFallback fallback = BandwidthFallback::Error);

/// Random-design per-model penalty constant at the current weight vector.
/// residuals_m are the model's residuals, averaged_residuals the weighted
/// combination over models, full_model_residuals the largest model's.
/// sigma2_hat is only consulted for the square loss (returns 2*sigma2_hat).
double c_rho_m_random(const LossSpec& spec, std::span<const double> residuals_m,
                      std::span<const double> averaged_residuals,
                      std::span<const double> full_model_residuals,
                      double sigma2_hat,
                      BandwidthFallback fallback = BandwidthFallback::Error);

/// Average curvature (1/n) sum_i R2_hat(residuals_m[i]) for the random-design
/// criterion. For the absolute loss R2_hat is the Epanechnikov density of the
/// full-model residuals; for Huber it is (2/n) sum_j 1(|e_j(M) + t| <= c).
/// Does not depend on the weight vector, so callers may cache it per model.
double average_curvature(const LossSpec& spec, std::span<const double> residuals_m,
                         std::span<const double> full_model_residuals,
                         BandwidthFallback fallback = BandwidthFallback::Error);

}  // namespace robavg

#endif  // ROBAVG_LOSSES_HPP

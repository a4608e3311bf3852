#include "robavg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robavg/errors.hpp"

namespace robavg {

double quantile_type7(std::span<const double> sample, double p) {
  if (sample.empty()) throw LengthMismatchError("quantile of empty sample");
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::span<const double> sample) {
  return quantile_type7(sample, 0.5);
}

double mean(std::span<const double> sample) {
  if (sample.empty()) throw LengthMismatchError("mean of empty sample");
  return std::accumulate(sample.begin(), sample.end(), 0.0) /
         static_cast<double>(sample.size());
}

double stddev(std::span<const double> sample) {
  const auto n = sample.size();
  if (n < 2) return 0.0;
  const double m = mean(sample);
  double ss = 0.0;
  for (double x : sample) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace robavg

#ifndef ROBAVG_STATS_HPP
#define ROBAVG_STATS_HPP

#include <span>
#include <vector>

namespace robavg {

/// Linear-interpolation (type-7) quantile of an unsorted sample.
/// p in [0, 1]; sample must be non-empty.
double quantile_type7(std::span<const double> sample, double p);

double median(std::span<const double> sample);

double mean(std::span<const double> sample);

/// Sample standard deviation (n-1 denominator); 0 for n < 2.
double stddev(std::span<const double> sample);

}  // namespace robavg

#endif  // ROBAVG_STATS_HPP

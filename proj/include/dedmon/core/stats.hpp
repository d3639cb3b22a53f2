#pragma once

#include <span>
#include <vector>

namespace dedmon::stats {

double mean(std::span<const double> x);

/// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> x);

/// Median of a copy of x (average of the two middle values for even n).
double median(std::span<const double> x);

/// Median that reorders `scratch` in place.
double median_inplace(std::vector<double>& scratch);

/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::span<const double> x, double q);

}  // namespace dedmon::stats

#pragma once

#include <span>

namespace gridshift {

// Least-squares slope of log(y) against log(x). Needs >= 2 points with x, y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Median of a copy of `values`; mean of the middle pair for even sizes.
double median(std::span<const double> values);

}  // namespace gridshift

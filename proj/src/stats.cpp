#include "gridshift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridshift/error.hpp"

namespace gridshift {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "log-log fit needs >= 2 paired samples");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorCode::InvalidArgument, "log-log fit needs distinct x values");
  return (m * sxy - sx * sy) / denom;
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty set");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace gridshift

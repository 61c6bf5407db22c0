#include "gridshift/density.hpp"

#include <cmath>
#include <numbers>

#include "gridshift/error.hpp"
#include "gridshift/stats.hpp"

namespace gridshift {

DensityEstimate fit_density(const PointSet& points, double h) {
  points.validate();
  return DensityEstimate{build_cell_tables(points, h), points.size(), h};
}

double evaluate(const DensityEstimate& est, std::span<const double> x) {
  if (x.size() != est.tables.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query has dimension " + std::to_string(x.size()) + ", estimate has " +
                                                  std::to_string(est.tables.dim()));
  }
  const std::size_t count = est.tables.count(bin(x, est.h));
  if (count == 0) return 0.0;
  const double volume = std::pow(est.h, static_cast<double>(x.size()));
  return static_cast<double>(count) / (static_cast<double>(est.n) * volume);
}

TargetDensity TargetDensity::parse(const std::string& name, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "target dimension must be >= 1");
  TargetDensity t;
  t.dim = dim;
  if (name == "uniform") {
    t.kind = TargetKind::UniformBox;
  } else if (name == "triangular") {
    if (dim > 2) throw Error(ErrorCode::InvalidArgument, "triangular target supports d = 1 or 2");
    t.kind = TargetKind::Triangular;
  } else if (name == "truncated-gaussian") {
    t.kind = TargetKind::TruncatedGaussian;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown target density '" + name + "'");
  }
  return t;
}

std::string TargetDensity::name() const {
  switch (kind) {
    case TargetKind::UniformBox: return "uniform";
    case TargetKind::Triangular: return "triangular";
    case TargetKind::TruncatedGaussian: return "truncated-gaussian";
  }
  return "unknown";
}

namespace {

double triangular_pdf(double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  return x < 0.5 ? 4.0 * x : 4.0 * (1.0 - x);
}

double gaussian_mass(double sigma) {
  return std::erf(0.5 / (sigma * std::numbers::sqrt2));  // P(|Z sigma| <= 0.5)
}

}  // namespace

double TargetDensity::pdf(std::span<const double> x) const {
  if (x.size() != dim) throw Error(ErrorCode::DimensionMismatch, "pdf query dimension mismatch");
  double p = 1.0;
  for (double v : x) {
    if (v < 0.0 || v > 1.0) return 0.0;
    switch (kind) {
      case TargetKind::UniformBox: break;
      case TargetKind::Triangular: p *= triangular_pdf(v); break;
      case TargetKind::TruncatedGaussian: {
        const double z = (v - 0.5) / sigma;
        p *= std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi) * gaussian_mass(sigma));
        break;
      }
    }
  }
  return p;
}

PointSet TargetDensity::sample(std::size_t n, std::mt19937_64& rng) const {
  PointSet out(n, dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.5, sigma);
  for (double& v : out.data()) {
    switch (kind) {
      case TargetKind::UniformBox: v = unit(rng); break;
      case TargetKind::Triangular: {
        const double u = unit(rng);
        v = u < 0.5 ? std::sqrt(u / 2.0) : 1.0 - std::sqrt((1.0 - u) / 2.0);
        break;
      }
      case TargetKind::TruncatedGaussian:
        do v = normal(rng);
        while (v < 0.0 || v > 1.0);
        break;
    }
  }
  return out;
}

double sup_error(const DensityEstimate& est, const TargetDensity& target) {
  const double h = est.h;
  const double step = h / 4.0;
  if (1.0 - 2.0 * h < 0.0) throw Error(ErrorCode::InvalidBandwidth, "bandwidth leaves no interior to evaluate");
  const std::size_t per_axis = static_cast<std::size_t>(std::floor((1.0 - 2.0 * h) / step)) + 1;
  const std::size_t d = target.dim;

  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  double worst = 0.0;
  while (true) {
    for (std::size_t k = 0; k < d; ++k) x[k] = h + static_cast<double>(idx[k]) * step;
    worst = std::max(worst, std::abs(evaluate(est, x) - target.pdf(x)));
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return worst;
}

RateReport rate_experiment(const TargetDensity& target, const std::vector<std::size_t>& sample_sizes, double alpha,
                           std::uint64_t seed) {
  if (sample_sizes.size() < 3) throw Error(ErrorCode::InvalidArgument, "rate experiment needs >= 3 sample sizes");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  for (std::size_t i = 1; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] <= sample_sizes[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "sample sizes must be strictly increasing");
    }
  }
  RateReport report;
  report.sample_sizes = sample_sizes;
  const double d = static_cast<double>(target.dim);
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    const std::size_t n = sample_sizes[i];
    std::mt19937_64 rng(seed + i);
    const double h = std::pow(static_cast<double>(n), -1.0 / (2.0 * alpha + d));
    const DensityEstimate est = fit_density(target.sample(n, rng), h);
    report.bandwidths.push_back(h);
    report.sup_errors.push_back(sup_error(est, target));
  }
  std::vector<double> ns(sample_sizes.begin(), sample_sizes.end());
  report.fitted_exponent = loglog_slope(ns, report.sup_errors);
  return report;
}

}  // namespace gridshift

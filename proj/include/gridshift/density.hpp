#pragma once

// Grid-cell density estimator p_h(x) = |X ∩ G(x)| / (n h^d), where G(x) is the
// cell of edge h containing x, plus a harness that measures its sup error
// against analytic targets as n grows with h = n^(-1/(2 alpha + d)).
//
// The uniform-consistency guarantee behind the harness assumes the target has
// compact support with a regular boundary, a positive lower bound on its
// support, and is alpha-Hölder. The built-in targets below all satisfy that;
// the associated constants are not computable and are not modeled here.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

struct DensityEstimate {
  CellTables tables;
  std::size_t n = 0;
  double h = 0.0;
};

DensityEstimate fit_density(const PointSet& points, double h);

// count[bin(x, h)] / (n h^d), 0 for an unoccupied cell.
double evaluate(const DensityEstimate& est, std::span<const double> x);

enum class TargetKind { UniformBox, Triangular, TruncatedGaussian };

// Analytic target densities on [0,1]^d. Triangular peaks at 0.5 with density
// 4x / 4(1-x) per axis (product over axes); the truncated Gaussian is an
// isotropic N(0.5, sigma^2) restricted to the unit box.
struct TargetDensity {
  TargetKind kind = TargetKind::UniformBox;
  std::size_t dim = 1;
  double sigma = 0.25;  // TruncatedGaussian only

  static TargetDensity parse(const std::string& name, std::size_t dim);
  std::string name() const;

  double pdf(std::span<const double> x) const;
  PointSet sample(std::size_t n, std::mt19937_64& rng) const;
};

struct RateReport {
  std::vector<std::size_t> sample_sizes;
  std::vector<double> bandwidths;
  std::vector<double> sup_errors;
  double fitted_exponent = 0.0;  // log-log slope of sup error vs n
};

// Sup |p_h - p| over a lattice of spacing h/4 covering [h, 1-h]^d.
double sup_error(const DensityEstimate& est, const TargetDensity& target);

// Sample size i draws from an mt19937_64 seeded with seed + i.
RateReport rate_experiment(const TargetDensity& target, const std::vector<std::size_t>& sample_sizes, double alpha,
                           std::uint64_t seed);

}  // namespace gridshift

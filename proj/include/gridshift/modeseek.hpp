#pragma once

// Mode-seeking engines: MeanShift++ (grid neighborhoods, O(n 3^d) per
// iteration), the classical MeanShift baseline (O(n^2 d) per iteration), and
// conversion of converged iterates into cluster labels.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

enum class Kernel { Flat, Gaussian };

struct ShiftConfig {
  double h = 1.0;
  // Threshold on the summed Euclidean movement of one iteration. Unset means
  // 1e-4 * n * h.
  std::optional<double> eta;
  int max_iters = 300;
  // Baseline only; MeanShift++ is kernel-free.
  Kernel kernel = Kernel::Flat;
  // 0 = auto (GRIDSHIFT_THREADS, else hardware concurrency).
  std::size_t threads = 0;
  // Wall-clock budget for a full run in seconds; 0 = unlimited. Checked
  // between iterations.
  double time_limit = 0.0;

  double resolved_eta(std::size_t n) const;
  // Throws InvalidBandwidth / InvalidArgument.
  void validate() const;
};

struct Labeling {
  std::vector<int> labels;  // length n, dense ids in [0, k)
  int k = 0;
  PointSet modes;           // k x d
};

struct ShiftTrace {
  int iterations = 0;
  std::vector<double> total_movement_per_iter;
  bool converged = false;
  bool timed_out = false;
};

struct ClusterResult {
  Labeling labeling;
  ShiftTrace trace;
  PointSet converged;  // final iterate
};

struct StepResult {
  PointSet points;
  double total_movement = 0.0;
};

// One MeanShift++ iteration: rebuild the cell tables from `points` and move
// every point to the mean of its 3^d cell neighborhood.
StepResult meanshiftpp_step(const PointSet& points, const ShiftConfig& cfg);

ClusterResult meanshiftpp(const PointSet& points, const ShiftConfig& cfg);

// One classical MeanShift iteration over all pairs. Flat kernel: closed ball
// of radius h. Gaussian: weights exp(-|d|^2 / (2 h^2)).
StepResult meanshift_step(const PointSet& points, const ShiftConfig& cfg);

ClusterResult meanshift_baseline(const PointSet& points, const ShiftConfig& cfg);

// Bins converged positions at edge length h and merges Chebyshev-adjacent
// occupied cells (union-find). Each connected component is one cluster, its
// mode the mean of the member positions. Ids follow first appearance in
// point order.
Labeling extract_clusters(const PointSet& converged, double h);

enum class Engine { MeanShiftPP, MeanShift };

ClusterResult run_engine(Engine engine, const PointSet& points, const ShiftConfig& cfg);

const char* engine_name(Engine engine);
// Accepts "meanshiftpp" and "meanshift".
Engine parse_engine(const std::string& name);

}  // namespace gridshift

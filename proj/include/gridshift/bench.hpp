#pragma once

// Runtime-scaling harness and bandwidth sweeps. Timings cover the engine call
// only (steady clock), never data generation or I/O. Runs are strictly
// sequential so no two timed runs overlap.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/datasets.hpp"
#include "gridshift/modeseek.hpp"

namespace gridshift {

struct BenchRecord {
  Engine engine = Engine::MeanShiftPP;
  std::size_t n = 0, d = 0;
  double h = 0.0;
  int iters = 0;
  int k = 0;
  double wall_time = 0.0;  // seconds, median over repeats
  std::optional<double> ari, ami;
  bool censored = false;   // exceeded the wall cap; excluded from fits
};

struct BenchOptions {
  int repeats = 3;
  double wall_cap = 0.0;    // seconds per run, 0 = none
  std::size_t threads = 1;  // engine threads; 0 = auto
  std::optional<double> eta;
  int max_iters = 300;
  bool score = true;        // compute ARI/AMI against the mixture labels
};

struct BenchReport {
  std::vector<BenchRecord> records;
  std::map<Engine, double> slopes;  // log(time) vs log(n); engines with < 2 valid sizes are absent
  std::vector<std::string> warnings;
};

// One converged run per repeat for each (engine, n); data for size n is
// generate_mixture(spec, n). Once an engine is censored at some n, its larger
// sizes are skipped and recorded as censored too.
BenchReport bench_scaling(const std::vector<Engine>& engines, const std::vector<std::size_t>& n_grid,
                          const GaussianMixtureSpec& spec, double h, const BenchOptions& opts = {});

struct SweepRow {
  double h = 0.0;
  double ari = 0.0, ami = 0.0;
  int k = 0;
  int iters = 0;
  double wall_time = 0.0;
  bool best = false;  // highest ARI (first on ties)
};

std::vector<SweepRow> sweep_bandwidth(const PointSet& points, const std::vector<int>& labels, Engine engine,
                                      const std::vector<double>& h_grid, std::optional<double> eta = std::nullopt,
                                      std::size_t threads = 1);

// Inclusive arithmetic grid lo, lo + step, ..., up to hi (within step/1000).
std::vector<double> linear_grid(double lo, double hi, double step);

}  // namespace gridshift

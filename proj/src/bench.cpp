#include "gridshift/bench.hpp"

#include <chrono>
#include <cmath>

#include "gridshift/error.hpp"
#include "gridshift/metrics.hpp"
#include "gridshift/stats.hpp"

namespace gridshift {

namespace {

struct TimedRun {
  ClusterResult result;
  double seconds;
};

TimedRun timed(Engine engine, const PointSet& points, const ShiftConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ClusterResult r = run_engine(engine, points, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(r), std::chrono::duration<double>(t1 - t0).count()};
}

}  // namespace

BenchReport bench_scaling(const std::vector<Engine>& engines, const std::vector<std::size_t>& n_grid,
                          const GaussianMixtureSpec& spec, double h, const BenchOptions& opts) {
  if (engines.empty()) throw Error(ErrorCode::InvalidArgument, "no engines to benchmark");
  if (n_grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "scaling fit needs >= 4 sizes");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "sizes must be strictly increasing");
  }
  if (opts.repeats < 3) throw Error(ErrorCode::InvalidArgument, "repeats must be >= 3");
  spec.validate();

  ShiftConfig cfg;
  cfg.h = h;
  cfg.eta = opts.eta;
  cfg.max_iters = opts.max_iters;
  cfg.threads = opts.threads;
  cfg.time_limit = opts.wall_cap;
  cfg.validate();

  BenchReport report;
  for (Engine engine : engines) {
    bool censored = false;
    std::vector<double> ns, times;
    for (std::size_t n : n_grid) {
      BenchRecord rec;
      rec.engine = engine;
      rec.n = n;
      rec.d = spec.d;
      rec.h = h;
      if (censored) {
        rec.censored = true;
        report.records.push_back(rec);
        continue;
      }
      const LabeledPoints data = generate_mixture(spec, n);
      std::vector<double> secs;
      ClusterResult last;
      for (int r = 0; r < opts.repeats && !censored; ++r) {
        TimedRun run = timed(engine, data.points, cfg);
        secs.push_back(run.seconds);
        censored = run.result.trace.timed_out;
        last = std::move(run.result);
      }
      rec.wall_time = median(secs);
      rec.iters = last.trace.iterations;
      rec.k = last.labeling.k;
      rec.censored = censored;
      if (censored) {
        report.warnings.push_back(std::string(engine_name(engine)) + " exceeded the wall cap at n=" +
                                  std::to_string(n) + "; excluded from the fit");
      } else {
        if (opts.score && n >= 2) {
          rec.ari = adjusted_rand_index(data.labels, last.labeling.labels);
          rec.ami = adjusted_mutual_information(data.labels, last.labeling.labels);
        }
        ns.push_back(static_cast<double>(n));
        times.push_back(rec.wall_time);
      }
      report.records.push_back(rec);
    }
    if (ns.size() >= 2) {
      report.slopes[engine] = loglog_slope(ns, times);
    } else {
      report.warnings.push_back(std::string(engine_name(engine)) + ": fewer than 2 uncensored sizes, no slope");
    }
  }
  return report;
}

std::vector<SweepRow> sweep_bandwidth(const PointSet& points, const std::vector<int>& labels, Engine engine,
                                      const std::vector<double>& h_grid, std::optional<double> eta,
                                      std::size_t threads) {
  if (h_grid.empty()) throw Error(ErrorCode::InvalidArgument, "bandwidth grid is empty");
  if (labels.size() != points.size()) throw Error(ErrorCode::DimensionMismatch, "labels do not match points");
  std::vector<SweepRow> rows;
  std::size_t best = 0;
  for (double h : h_grid) {
    ShiftConfig cfg;
    cfg.h = h;
    cfg.eta = eta;
    cfg.threads = threads;
    const TimedRun run = timed(engine, points, cfg);
    SweepRow row;
    row.h = h;
    row.ari = adjusted_rand_index(labels, run.result.labeling.labels);
    row.ami = adjusted_mutual_information(labels, run.result.labeling.labels);
    row.k = run.result.labeling.k;
    row.iters = run.result.trace.iterations;
    row.wall_time = run.seconds;
    rows.push_back(row);
    if (rows.size() == 1 || row.ari > rows[best].ari) best = rows.size() - 1;
  }
  rows[best].best = true;
  return rows;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "grid needs step > 0 and hi >= lo");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + step * 1e-3) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace gridshift

#include "gridshift/modeseek.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "gridshift/error.hpp"
#include "parallel.hpp"

namespace gridshift {

double ShiftConfig::resolved_eta(std::size_t n) const {
  return eta.value_or(1e-4 * static_cast<double>(n) * h);
}

void ShiftConfig::validate() const {
  check_bandwidth(h);
  if (eta && !(*eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  if (!(time_limit >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time_limit must be >= 0");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
}

namespace {

void check_input(const PointSet& points, const ShiftConfig& cfg) {
  cfg.validate();
  points.validate();
}

double movement(const PointSet& a, const PointSet& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ra = a.row(i), rb = b.row(i);
    double sq = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const double diff = ra[k] - rb[k];
      sq += diff * diff;
    }
    total += std::sqrt(sq);
  }
  return total;
}

using StepFn = StepResult (*)(const PointSet&, const ShiftConfig&);

ClusterResult run_loop(const PointSet& points, const ShiftConfig& cfg, StepFn step) {
  check_input(points, cfg);
  const double eta = cfg.resolved_eta(points.size());
  ClusterResult result;
  result.converged = points;
  const auto start = std::chrono::steady_clock::now();
  do {
    StepResult next = step(result.converged, cfg);
    result.converged = std::move(next.points);
    result.trace.total_movement_per_iter.push_back(next.total_movement);
    ++result.trace.iterations;
    if (next.total_movement < eta) {
      result.trace.converged = true;
      break;
    }
    if (cfg.time_limit > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > cfg.time_limit) {
      result.trace.timed_out = true;
      break;
    }
  } while (result.trace.iterations < cfg.max_iters);
  result.labeling = extract_clusters(result.converged, cfg.h);
  return result;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

StepResult meanshiftpp_step(const PointSet& points, const ShiftConfig& cfg) {
  check_input(points, cfg);
  const std::size_t n = points.size(), d = points.dim();

  CellTables tables(d, cfg.h);
  std::vector<std::size_t> slot_of(n);
  GridIndex g;
  for (std::size_t i = 0; i < n; ++i) {
    bin_into(points.row(i), cfg.h, g);
    slot_of[i] = tables.add(g, points.row(i));
  }

  // Every point in a cell shifts to the same neighborhood mean, so aggregate
  // once per occupied cell.
  const std::size_t cells = tables.cell_count();
  std::vector<double> cell_mean(cells * d);
  detail::parallel_for(cells, detail::worker_count(cfg.threads), 4096, [&](std::size_t b, std::size_t e) {
    GridIndex probe;
    for (std::size_t s = b; s < e; ++s) {
      std::span<double> out(cell_mean.data() + s * d, d);
      const std::size_t count = accumulate_neighborhood(tables, tables.key_at(s), out, probe);
      for (double& v : out) v /= static_cast<double>(count);
    }
  });

  StepResult result{PointSet(n, d), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = cell_mean.data() + slot_of[i] * d;
    std::copy(src, src + d, result.points.row(i).begin());
  }
  result.total_movement = movement(points, result.points);
  return result;
}

ClusterResult meanshiftpp(const PointSet& points, const ShiftConfig& cfg) {
  return run_loop(points, cfg, &meanshiftpp_step);
}

StepResult meanshift_step(const PointSet& points, const ShiftConfig& cfg) {
  check_input(points, cfg);
  const std::size_t n = points.size(), d = points.dim();
  const double h2 = cfg.h * cfg.h;
  const bool flat = cfg.kernel == Kernel::Flat;
  const double* data = points.data().data();

  StepResult result{PointSet(n, d), 0.0};
  detail::parallel_for(n, detail::worker_count(cfg.threads), 256, [&](std::size_t b, std::size_t e) {
    std::vector<double> acc(d);
    for (std::size_t i = b; i < e; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      double weight = 0.0;
      const double* yi = data + i * d;
      for (std::size_t j = 0; j < n; ++j) {
        const double* yj = data + j * d;
        double sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = yi[k] - yj[k];
          sq += diff * diff;
        }
        double w;
        if (flat) {
          if (sq > h2) continue;
          w = 1.0;
        } else {
          w = std::exp(-sq / (2.0 * h2));
        }
        weight += w;
        for (std::size_t k = 0; k < d; ++k) acc[k] += w * yj[k];
      }
      // weight > 0: point i always lies in its own window
      auto out = result.points.row(i);
      for (std::size_t k = 0; k < d; ++k) out[k] = acc[k] / weight;
    }
  });
  result.total_movement = movement(points, result.points);
  return result;
}

ClusterResult meanshift_baseline(const PointSet& points, const ShiftConfig& cfg) {
  return run_loop(points, cfg, &meanshift_step);
}

Labeling extract_clusters(const PointSet& converged, double h) {
  check_bandwidth(h);
  const std::size_t n = converged.size(), d = converged.dim();
  CellTables tables(d, h);
  std::vector<std::size_t> slot_of(n);
  GridIndex g;
  for (std::size_t i = 0; i < n; ++i) {
    bin_into(converged.row(i), h, g);
    slot_of[i] = tables.add(g, converged.row(i));
  }

  const std::size_t cells = tables.cell_count();
  UnionFind uf(cells);
  GridIndex probe;
  for (std::size_t s = 0; s < cells; ++s) {
    const GridIndex& key = tables.key_at(s);
    probe.coords = key.coords;
    for (std::size_t k = 0; k < d; ++k) probe.coords[k] -= 1;
    // same odometer walk as accumulate_neighborhood
    bool done = false;
    while (!done) {
      const std::size_t other = tables.find(probe);
      if (other != CellTables::npos) uf.unite(s, other);
      std::size_t k = d;
      while (true) {
        --k;
        if (probe.coords[k] < key.coords[k] + 1) {
          ++probe.coords[k];
          break;
        }
        probe.coords[k] = key.coords[k] - 1;
        if (k == 0) {
          done = true;
          break;
        }
      }
    }
  }

  Labeling out;
  out.labels.assign(n, -1);
  std::vector<int> id_of_root(cells, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(slot_of[i]);
    if (id_of_root[root] < 0) id_of_root[root] = out.k++;
    out.labels[i] = id_of_root[root];
  }

  out.modes = PointSet(static_cast<std::size_t>(out.k), d);
  std::vector<std::size_t> sizes(out.k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = out.labels[i];
    ++sizes[c];
    auto m = out.modes.row(c);
    const auto p = converged.row(i);
    for (std::size_t k = 0; k < d; ++k) m[k] += p[k];
  }
  for (int c = 0; c < out.k; ++c) {
    for (double& v : out.modes.row(c)) v /= static_cast<double>(sizes[c]);
  }
  return out;
}

ClusterResult run_engine(Engine engine, const PointSet& points, const ShiftConfig& cfg) {
  return engine == Engine::MeanShiftPP ? meanshiftpp(points, cfg) : meanshift_baseline(points, cfg);
}

const char* engine_name(Engine engine) { return engine == Engine::MeanShiftPP ? "meanshiftpp" : "meanshift"; }

Engine parse_engine(const std::string& name) {
  if (name == "meanshiftpp") return Engine::MeanShiftPP;
  if (name == "meanshift") return Engine::MeanShift;
  throw Error(ErrorCode::InvalidArgument, "unknown engine '" + name + "' (expected meanshiftpp or meanshift)");
}

}  // namespace gridshift

#include "gridshift/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridshift/error.hpp"

namespace gridshift {

PointSet::PointSet(std::size_t n, std::size_t d) : n_(n), d_(d), data_(n * d, 0.0) {}

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (data_.size() != n * d) {
    throw Error(ErrorCode::DimensionMismatch, "point buffer holds " + std::to_string(data_.size()) +
                                                  " values, expected " + std::to_string(n * d));
  }
}

void PointSet::validate() const {
  if (n_ == 0 || d_ == 0) throw Error(ErrorCode::InvalidArgument, "point set must have n >= 1 and d >= 1");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::InvalidPoint, "non-finite value at row " + std::to_string(i / d_) + ", column " +
                                               std::to_string(i % d_));
    }
  }
}

std::size_t GridIndexHash::operator()(const GridIndex& g) const noexcept {
  // splitmix-style mixing per coordinate, folded in order
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ g.coords.size();
  for (std::int64_t c : g.coords) {
    std::uint64_t z = static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidBandwidth, "bandwidth must be positive and finite, got " + std::to_string(h));
  }
}

void bin_into(std::span<const double> point, double h, GridIndex& out) {
  check_bandwidth(h);
  out.coords.resize(point.size());
  constexpr double kLimit = 9.0e18;
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (!std::isfinite(point[k])) {
      throw Error(ErrorCode::InvalidPoint, "non-finite coordinate at index " + std::to_string(k));
    }
    const double c = std::floor(point[k] / h);
    if (std::abs(c) > kLimit) {
      throw Error(ErrorCode::InvalidPoint, "coordinate " + std::to_string(point[k]) + " overflows the lattice");
    }
    out.coords[k] = static_cast<std::int64_t>(c);
  }
}

GridIndex bin(std::span<const double> point, double h) {
  GridIndex g;
  bin_into(point, h, g);
  return g;
}

CellTables::CellTables(std::size_t dim, double h) : d_(dim), h_(h) {
  check_bandwidth(h);
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "cell tables need d >= 1");
}

std::size_t CellTables::add(const GridIndex& g, std::span<const double> point) {
  if (g.dim() != d_ || point.size() != d_) {
    throw Error(ErrorCode::DimensionMismatch, "cell/point dimension does not match table dimension " +
                                                  std::to_string(d_));
  }
  auto [it, inserted] = slots_.try_emplace(g, keys_.size());
  if (inserted) {
    keys_.push_back(g);
    counts_.push_back(0);
    sums_.resize(sums_.size() + d_, 0.0);
  }
  const std::size_t slot = it->second;
  counts_[slot] += 1;
  double* s = sums_.data() + slot * d_;
  for (std::size_t k = 0; k < d_; ++k) s[k] += point[k];
  ++total_;
  return slot;
}

void CellTables::merge(const CellTables& other) {
  if (other.d_ != d_ || other.h_ != h_) {
    throw Error(ErrorCode::DimensionMismatch, "cannot merge cell tables with different d or h");
  }
  for (std::size_t slot = 0; slot < other.cell_count(); ++slot) {
    auto [it, inserted] = slots_.try_emplace(other.keys_[slot], keys_.size());
    if (inserted) {
      keys_.push_back(other.keys_[slot]);
      counts_.push_back(0);
      sums_.resize(sums_.size() + d_, 0.0);
    }
    const std::size_t mine = it->second;
    counts_[mine] += other.counts_[slot];
    const auto src = other.sum_at(slot);
    for (std::size_t k = 0; k < d_; ++k) sums_[mine * d_ + k] += src[k];
  }
  total_ += other.total_;
}

std::size_t CellTables::find(const GridIndex& g) const {
  const auto it = slots_.find(g);
  return it == slots_.end() ? npos : it->second;
}

std::size_t CellTables::count(const GridIndex& g) const {
  const std::size_t slot = find(g);
  return slot == npos ? 0 : counts_[slot];
}

std::span<const double> CellTables::sum(const GridIndex& g) const {
  const std::size_t slot = find(g);
  if (slot == npos) return {};
  return sum_at(slot);
}

CellTables build_cell_tables(const PointSet& points, double h) {
  CellTables tables(points.dim(), h);
  GridIndex g;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bin_into(points.row(i), h, g);
    tables.add(g, points.row(i));
  }
  return tables;
}

std::size_t accumulate_neighborhood(const CellTables& tables, const GridIndex& g, std::span<double> sum_out,
                                    GridIndex& probe) {
  const std::size_t d = tables.dim();
  if (g.dim() != d || sum_out.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "query dimension " + std::to_string(g.dim()) +
                                                  " does not match table dimension " + std::to_string(d));
  }
  std::fill(sum_out.begin(), sum_out.end(), 0.0);
  probe.coords = g.coords;
  for (std::size_t k = 0; k < d; ++k) probe.coords[k] -= 1;

  std::size_t count = 0;
  while (true) {
    const std::size_t slot = tables.find(probe);
    if (slot != CellTables::npos) {
      count += tables.count_at(slot);
      const auto s = tables.sum_at(slot);
      for (std::size_t k = 0; k < d; ++k) sum_out[k] += s[k];
    }
    // odometer over {-1,0,1}^d, last coordinate fastest
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (probe.coords[k] < g.coords[k] + 1) {
        ++probe.coords[k];
        break;
      }
      probe.coords[k] = g.coords[k] - 1;
      if (k == 0) return count;
    }
  }
}

NeighborSum neighbor_aggregate(const CellTables& tables, const GridIndex& g) {
  NeighborSum out;
  if (g.dim() != tables.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query dimension " + std::to_string(g.dim()) +
                                                  " does not match table dimension " + std::to_string(tables.dim()));
  }
  out.sum.assign(tables.dim(), 0.0);
  GridIndex probe;
  out.count = accumulate_neighborhood(tables, g, out.sum, probe);
  return out;
}

std::int64_t chebyshev(const GridIndex& a, const GridIndex& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "lattice coordinates differ in dimension");
  std::int64_t m = 0;
  for (std::size_t k = 0; k < a.dim(); ++k) m = std::max(m, std::abs(a.coords[k] - b.coords[k]));
  return m;
}

}  // namespace gridshift

#pragma once

// Spatial hashing of points into axis-aligned cells of edge length h, and the
// count/sum tables that make one MeanShift++ shift linear in n.

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace gridshift {

// n x d row-major matrix of finite reals.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t n, std::size_t d);                      // zero-filled
  PointSet(std::size_t n, std::size_t d, std::vector<double> data);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * d_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data_[i * d_ + k]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  // Throws InvalidArgument for n == 0 or d == 0 and InvalidPoint on NaN/inf.
  void validate() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

// Integer lattice coordinate of one cell.
struct GridIndex {
  std::vector<std::int64_t> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

struct GridIndexHash {
  std::size_t operator()(const GridIndex& g) const noexcept;
};

// Elementwise floor(point / h), rounding toward -inf. A coordinate exactly on
// a boundary lands in the higher cell.
GridIndex bin(std::span<const double> point, double h);

// Allocation-free variant; `out` is resized to point.size().
void bin_into(std::span<const double> point, double h, GridIndex& out);

void check_bandwidth(double h);

// Paired tables over occupied cells: count (C) and coordinate sum (S). Both
// share one key set; empty cells are never stored.
class CellTables {
 public:
  CellTables(std::size_t dim, double h);

  std::size_t dim() const noexcept { return d_; }
  double bandwidth() const noexcept { return h_; }

  // Number of occupied cells.
  std::size_t cell_count() const noexcept { return keys_.size(); }
  // Sum of all counts; equals the number of points added.
  std::size_t total() const noexcept { return total_; }

  // Returns the slot of g.
  std::size_t add(const GridIndex& g, std::span<const double> point);
  // Folds another table built at the same h and d into this one.
  void merge(const CellTables& other);

  // Slot of an occupied cell, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const GridIndex& g) const;

  std::size_t count(const GridIndex& g) const;
  // Empty span when the cell is unoccupied.
  std::span<const double> sum(const GridIndex& g) const;

  // Slot-addressed access, slots numbered in first-insertion order.
  const GridIndex& key_at(std::size_t slot) const { return keys_[slot]; }
  std::size_t count_at(std::size_t slot) const { return counts_[slot]; }
  std::span<const double> sum_at(std::size_t slot) const { return {sums_.data() + slot * d_, d_}; }

 private:
  std::size_t d_;
  double h_;
  std::size_t total_ = 0;
  std::unordered_map<GridIndex, std::size_t, GridIndexHash> slots_;
  std::vector<GridIndex> keys_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
};

// Single pass over `points` in input order.
CellTables build_cell_tables(const PointSet& points, double h);

struct NeighborSum {
  std::size_t count = 0;
  std::vector<double> sum;
};

// Count and coordinate sum over the 3^d cells g + v, v in {-1,0,1}^d. Offsets
// are visited in lexicographic order; absent cells contribute nothing.
NeighborSum neighbor_aggregate(const CellTables& tables, const GridIndex& g);

// Same aggregation into caller-owned buffers. `sum_out` must have length d and
// is overwritten; `probe` is scratch. Returns the count.
std::size_t accumulate_neighborhood(const CellTables& tables, const GridIndex& g,
                                    std::span<double> sum_out, GridIndex& probe);

// Chebyshev (L-infinity) distance between two lattice coordinates.
std::int64_t chebyshev(const GridIndex& a, const GridIndex& b);

}  // namespace gridshift

#pragma once

// External clustering-quality indices: ARI, AMI (arithmetic-mean
// normalization, permutation-model expected MI), Fowlkes-Mallows.
//
// Conventions for degenerate inputs:
//  - identical partitions (up to relabeling) score 1 on all three indices;
//  - AMI is 0 when exactly one side is a single cluster;
//  - FM is 0 when either side has no co-clustered pair (0/0 guard).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gridshift {

struct ContingencyTable {
  std::size_t rows = 0, cols = 0;
  std::vector<std::int64_t> counts;  // rows x cols, row-major
  std::vector<std::int64_t> row_sums, col_sums;
  std::int64_t n = 0;

  std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
};

// Labels may be arbitrary integers; they are densified in order of first appearance.
ContingencyTable contingency(std::span<const int> a, std::span<const int> b);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);
double adjusted_mutual_information(std::span<const int> a, std::span<const int> b);
double fowlkes_mallows(std::span<const int> a, std::span<const int> b);

// Building blocks, exposed for diagnostics.
double mutual_information(const ContingencyTable& t);
double expected_mutual_information(const ContingencyTable& t);
double entropy(std::span<const std::int64_t> marginal, std::int64_t n);

}  // namespace gridshift

#pragma once

// Test-only reference implementations. Each one recomputes its quantity by
// the most literal route available and shares no code with the library path
// it checks (beyond the PointSet container).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "gridshift/grid.hpp"

namespace oracle {

// floor(x / h) per coordinate, independent of gridshift::bin.
inline std::vector<long long> cell_of(std::span<const double> p, double h) {
  std::vector<long long> c(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) c[k] = static_cast<long long>(std::floor(p[k] / h));
  return c;
}

inline bool within_one(const std::vector<long long>& a, const std::vector<long long>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::llabs(a[k] - b[k]) > 1) return false;
  }
  return true;
}

struct Aggregate {
  std::size_t count = 0;
  std::vector<double> sum;
};

// Linear scan: every point whose cell is within Chebyshev distance 1 of `cell`.
inline Aggregate neighbor_scan(const gridshift::PointSet& pts, const std::vector<long long>& cell, double h) {
  Aggregate out;
  out.sum.assign(pts.dim(), 0.0);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (!within_one(cell_of(pts.row(j), h), cell)) continue;
    ++out.count;
    for (std::size_t k = 0; k < pts.dim(); ++k) out.sum[k] += pts(j, k);
  }
  return out;
}

// Brute-force MeanShift++ step: O(n^2) neighbor-cell means.
inline gridshift::PointSet shift_step(const gridshift::PointSet& pts, double h) {
  std::vector<std::vector<long long>> cells(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) cells[j] = cell_of(pts.row(j), h);
  gridshift::PointSet out(pts.size(), pts.dim());
  std::vector<double> sum(pts.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::size_t count = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (!within_one(cells[i], cells[j])) continue;
      ++count;
      for (std::size_t k = 0; k < pts.dim(); ++k) sum[k] += pts(j, k);
    }
    for (std::size_t k = 0; k < pts.dim(); ++k) out(i, k) = sum[k] / static_cast<double>(count);
  }
  return out;
}

// Pair enumeration over all C(n,2) pairs.
struct PairCounts {
  double both = 0, only_a = 0, only_b = 0, neither = 0;
};

inline PairCounts pair_counts(const std::vector<int>& a, const std::vector<int>& b) {
  PairCounts pc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) pc.both += 1;
      else if (sa) pc.only_a += 1;
      else if (sb) pc.only_b += 1;
      else pc.neither += 1;
    }
  }
  return pc;
}

// Hubert-Arabie ARI written from pair counts.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  const PairCounts pc = pair_counts(a, b);
  const double total = pc.both + pc.only_a + pc.only_b + pc.neither;
  const double same_a = pc.both + pc.only_a, same_b = pc.both + pc.only_b;
  const double expected = same_a * same_b / total;
  const double max_index = 0.5 * (same_a + same_b);
  if (max_index == expected) return 1.0;
  return (pc.both - expected) / (max_index - expected);
}

// Identical partitions (no pair split by exactly one side) score 1.
inline double fm(const std::vector<int>& a, const std::vector<int>& b) {
  const PairCounts pc = pair_counts(a, b);
  if (pc.only_a == 0 && pc.only_b == 0) return 1.0;
  const double same_a = pc.both + pc.only_a, same_b = pc.both + pc.only_b;
  if (pc.both == 0 || same_a == 0 || same_b == 0) return 0.0;
  return pc.both / std::sqrt(same_a * same_b);
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact at every step
  return r;
}

// Expected MI under the permutation model: literal triple loop over marginal
// pairs and the hypergeometric support of n_ij, with exact integer binomials.
inline double expected_mi(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, std::uint64_t> ra, cb;
  for (int x : a) ++ra[x];
  for (int x : b) ++cb[x];
  const std::uint64_t n = a.size();
  const double nd = static_cast<double>(n);
  double emi = 0.0;
  for (const auto& [_, ai] : ra) {
    for (const auto& [__, bj] : cb) {
      const std::uint64_t lo = ai + bj > n ? ai + bj - n : 0;
      for (std::uint64_t nij = std::max<std::uint64_t>(lo, 1); nij <= std::min(ai, bj); ++nij) {
        const double p = static_cast<double>(choose(bj, nij)) * static_cast<double>(choose(n - bj, ai - nij)) /
                         static_cast<double>(choose(n, ai));
        const double v = static_cast<double>(nij);
        emi += p * v / nd * std::log(nd * v / (static_cast<double>(ai) * static_cast<double>(bj)));
      }
    }
  }
  return emi;
}

inline double mi(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ma, mb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ma[a[i]] += 1;
    mb[b[i]] += 1;
  }
  const double n = static_cast<double>(a.size());
  double out = 0.0;
  for (const auto& [key, c] : joint) out += c / n * std::log(n * c / (ma[key.first] * mb[key.second]));
  return out;
}

inline double entropy(const std::vector<int>& a) {
  std::map<int, double> m;
  for (int x : a) m[x] += 1;
  double h = 0.0;
  for (const auto& [_, c] : m) h -= c / a.size() * std::log(c / a.size());
  return h;
}

// Conventions: identical partitions score 1; a single-cluster side against a
// nontrivial one scores 0.
inline double ami(const std::vector<int>& a, const std::vector<int>& b) {
  const PairCounts pc = pair_counts(a, b);
  if (pc.only_a == 0 && pc.only_b == 0) return 1.0;
  if (pc.neither + pc.only_b == 0 || pc.neither + pc.only_a == 0) return 0.0;
  const double e = expected_mi(a, b);
  return (mi(a, b) - e) / (0.5 * (entropy(a) + entropy(b)) - e);
}

inline gridshift::PointSet uniform_points(std::size_t n, std::size_t d, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  gridshift::PointSet p(n, d);
  for (double& v : p.data()) v = u(rng);
  return p;
}

inline std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, k - 1);
  std::vector<int> out(n);
  for (int& v : out) v = u(rng);
  return out;
}

}  // namespace oracle

#include "gridshift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "gridshift/error.hpp"

namespace gridshift {

namespace {

void check_pair(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "label vectors differ in length (" + std::to_string(a.size()) +
                                                  " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 labeled points");
}

std::vector<std::size_t> densify(std::span<const int> labels, std::size_t& k) {
  std::unordered_map<int, std::size_t> ids;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = ids.try_emplace(labels[i], ids.size()).first->second;
  }
  k = ids.size();
  return out;
}

double pairs(std::int64_t m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

// Same partition up to relabeling: each row and each column has exactly one nonzero cell.
bool same_partition(const ContingencyTable& t) {
  if (t.rows != t.cols) return false;
  for (std::size_t r = 0; r < t.rows; ++r) {
    std::size_t nonzero = 0;
    for (std::size_t c = 0; c < t.cols; ++c) nonzero += t.at(r, c) != 0;
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

ContingencyTable contingency(std::span<const int> a, std::span<const int> b) {
  check_pair(a, b);
  ContingencyTable t;
  const auto da = densify(a, t.rows);
  const auto db = densify(b, t.cols);
  t.counts.assign(t.rows * t.cols, 0);
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++t.counts[da[i] * t.cols + db[i]];
    ++t.row_sums[da[i]];
    ++t.col_sums[db[i]];
  }
  t.n = static_cast<std::int64_t>(a.size());
  return t;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  const ContingencyTable t = contingency(a, b);
  if (same_partition(t)) return 1.0;
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (std::int64_t c : t.counts) index += pairs(c);
  for (std::int64_t r : t.row_sums) sum_a += pairs(r);
  for (std::int64_t c : t.col_sums) sum_b += pairs(c);
  const double expected = sum_a * sum_b / pairs(t.n);
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double entropy(std::span<const std::int64_t> marginal, std::int64_t n) {
  const double nn = static_cast<double>(n);
  double h = 0.0;
  for (std::int64_t m : marginal) {
    if (m == 0) continue;
    const double p = static_cast<double>(m) / nn;
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      const std::int64_t nij = t.at(r, c);
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n * std::log(n * v / (static_cast<double>(t.row_sums[r]) * static_cast<double>(t.col_sums[c])));
    }
  }
  return mi;
}

double expected_mutual_information(const ContingencyTable& t) {
  const std::int64_t n = t.n;
  const double nd = static_cast<double>(n);
  const auto lfact = [](std::int64_t m) { return std::lgamma(static_cast<double>(m) + 1.0); };
  const double lfact_n = lfact(n);
  double emi = 0.0;
  for (std::int64_t ai : t.row_sums) {
    for (std::int64_t bj : t.col_sums) {
      const double fixed = lfact(ai) + lfact(bj) + lfact(n - ai) + lfact(n - bj) - lfact_n;
      const std::int64_t lo = std::max<std::int64_t>(1, ai + bj - n);
      const std::int64_t hi = std::min(ai, bj);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double v = static_cast<double>(nij);
        const double term = v / nd * std::log(nd * v / (static_cast<double>(ai) * static_cast<double>(bj)));
        const double log_p = fixed - lfact(nij) - lfact(ai - nij) - lfact(bj - nij) - lfact(n - ai - bj + nij);
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

double adjusted_mutual_information(std::span<const int> a, std::span<const int> b) {
  const ContingencyTable t = contingency(a, b);
  if (same_partition(t)) return 1.0;
  if (t.rows == 1 || t.cols == 1) return 0.0;
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double mean_h = 0.5 * (entropy(t.row_sums, t.n) + entropy(t.col_sums, t.n));
  double denom = mean_h - emi;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  denom = denom < 0.0 ? std::min(denom, -eps) : std::max(denom, eps);
  return (mi - emi) / denom;
}

double fowlkes_mallows(std::span<const int> a, std::span<const int> b) {
  const ContingencyTable t = contingency(a, b);
  if (same_partition(t)) return 1.0;
  double tp = 0.0, together_a = 0.0, together_b = 0.0;
  for (std::int64_t c : t.counts) tp += pairs(c);
  for (std::int64_t r : t.row_sums) together_a += pairs(r);
  for (std::int64_t c : t.col_sums) together_b += pairs(c);
  if (tp == 0.0 || together_a == 0.0 || together_b == 0.0) return 0.0;
  return tp / std::sqrt(together_a * together_b);
}

}  // namespace gridshift

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

struct GaussianMixtureSpec {
  std::size_t k = 1;
  std::size_t d = 2;
  std::vector<double> centers;  // k x d
  double sigma = 1.0;           // isotropic; 0 places every sample on its center
  std::vector<double> weights;  // length k, nonnegative, sums to 1
  std::uint64_t seed = 0;

  void validate() const;
};

struct LabeledPoints {
  PointSet points;
  std::vector<int> labels;  // empty when unlabeled
};

// n i.i.d. draws: component by weight, then isotropic Gaussian noise. The
// returned labels are the component ids. Deterministic for a given seed.
LabeledPoints generate_mixture(const GaussianMixtureSpec& spec, std::size_t n);

struct CsvDataset {
  PointSet points;
  std::optional<std::vector<int>> labels;  // dense, first-appearance order
  std::vector<std::string> label_names;    // label id -> original text
  std::vector<std::string> column_names;   // from the header, if present
};

// Numeric CSV with an optional header row (detected when any feature cell of
// the first row is non-numeric). With `last_column_is_label`, the final column
// is read as a categorical label. Parse errors name the row and column.
CsvDataset load_points_csv(const std::string& path, bool last_column_is_label);
CsvDataset parse_points_csv(const std::string& text, bool last_column_is_label, const std::string& source = "<input>");

// Writes features (and labels, if non-empty) with a header row.
void write_points_csv(const std::string& path, const PointSet& points, const std::vector<int>& labels);

}  // namespace gridshift

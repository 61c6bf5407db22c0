#include "gridshift/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_map>

#include "gridshift/error.hpp"

namespace gridshift {

void GaussianMixtureSpec::validate() const {
  if (k == 0 || d == 0) throw Error(ErrorCode::InvalidArgument, "mixture needs k >= 1 and d >= 1");
  if (centers.size() != k * d) throw Error(ErrorCode::DimensionMismatch, "mixture centers must be k x d");
  if (weights.size() != k) throw Error(ErrorCode::DimensionMismatch, "mixture weights must have length k");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "mixture weights must sum to 1");
  for (double c : centers) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidPoint, "mixture centers must be finite");
  }
}

LabeledPoints generate_mixture(const GaussianMixtureSpec& spec, std::size_t n) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::discrete_distribution<int> pick(spec.weights.begin(), spec.weights.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  LabeledPoints out{PointSet(n, spec.d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = pick(rng);
    out.labels[i] = c;
    auto row = out.points.row(i);
    for (std::size_t k = 0; k < spec.d; ++k) {
      row[k] = spec.centers[c * spec.d + k] + spec.sigma * noise(rng);
    }
  }
  return out;
}

namespace {

// One record of an RFC-4180 subset: comma separated, optional double quotes
// with "" escapes, no embedded newlines.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

CsvDataset parse_points_csv(const std::string& text, bool last_column_is_label, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_record(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, source + ": no data rows");

  const std::size_t width = rows.front().size();
  const std::size_t features = last_column_is_label ? width - 1 : width;
  if (features == 0) throw Error(ErrorCode::Parse, source + ": no feature columns");

  CsvDataset ds;
  std::size_t first = 0;
  for (std::size_t c = 0; c < features; ++c) {
    if (!parse_number(rows.front()[c])) {
      first = 1;
      for (const auto& name : rows.front()) ds.column_names.push_back(trim(name));
      break;
    }
  }
  if (rows.size() <= first) throw Error(ErrorCode::Parse, source + ": header without data rows");

  const std::size_t n = rows.size() - first;
  std::vector<double> data;
  data.reserve(n * features);
  std::vector<int> labels;
  std::unordered_map<std::string, int> label_ids;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != width) {
      throw Error(ErrorCode::Parse, source + ": row " + std::to_string(line_numbers[r]) + " has " +
                                        std::to_string(row.size()) + " columns, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < features; ++c) {
      const auto v = parse_number(row[c]);
      if (!v) {
        throw Error(ErrorCode::Parse, source + ": row " + std::to_string(line_numbers[r]) + ", column " +
                                          std::to_string(c + 1) + ": non-numeric value '" + row[c] + "'");
      }
      data.push_back(*v);
    }
    if (last_column_is_label) {
      const std::string key = trim(row.back());
      const auto [it, inserted] = label_ids.try_emplace(key, static_cast<int>(ds.label_names.size()));
      if (inserted) ds.label_names.push_back(key);
      labels.push_back(it->second);
    }
  }
  ds.points = PointSet(n, features, std::move(data));
  if (last_column_is_label) ds.labels = std::move(labels);
  return ds;
}

CsvDataset load_points_csv(const std::string& path, bool last_column_is_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_points_csv(buf.str(), last_column_is_label, path);
}

void write_points_csv(const std::string& path, const PointSet& points, const std::vector<int>& labels) {
  if (!labels.empty() && labels.size() != points.size()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match point count");
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  for (std::size_t k = 0; k < points.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  if (!labels.empty()) out << ",label";
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < points.dim(); ++k) out << (k ? "," : "") << points(i, k);
    if (!labels.empty()) out << ',' << labels[i];
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

}  // namespace gridshift

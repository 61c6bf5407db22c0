#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "gridshift/bench.hpp"
#include "gridshift/datasets.hpp"
#include "gridshift/error.hpp"
#include "gridshift/stats.hpp"

using namespace gridshift;

namespace {

GaussianMixtureSpec mixture(std::size_t k, std::size_t d, std::vector<double> centers, double sigma,
                            std::vector<double> weights, std::uint64_t seed = 0) {
  GaussianMixtureSpec spec;
  spec.k = k;
  spec.d = d;
  spec.centers = std::move(centers);
  spec.sigma = sigma;
  spec.weights = std::move(weights);
  spec.seed = seed;
  return spec;
}

std::string error_message(const std::string& csv) {
  try {
    parse_points_csv(csv, false);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << csv;
  return {};
}

}  // namespace

TEST(Mixture, ZeroSigmaSitsOnCenter) {
  const auto out = generate_mixture(mixture(1, 3, {1.0, -2.0, 0.5}, 0.0, {1.0}), 50);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(out.points(i, 0), 1.0);
    EXPECT_EQ(out.points(i, 1), -2.0);
    EXPECT_EQ(out.points(i, 2), 0.5);
  }
}

TEST(Mixture, ZeroWeightComponentUnused) {
  const auto out = generate_mixture(mixture(2, 1, {0.0, 5.0}, 1.0, {1.0, 0.0}), 500);
  for (int l : out.labels) EXPECT_EQ(l, 0);
}

TEST(Mixture, ProportionsWithinBinomialBands) {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const std::size_t n = 30000;
  const auto out = generate_mixture(mixture(3, 2, {0, 0, 1, 1, 2, 2}, 0.1, w, 42), n);
  std::vector<double> counts(3, 0.0);
  for (int l : out.labels) counts[l] += 1;
  for (int c = 0; c < 3; ++c) {
    const double sd = std::sqrt(n * w[c] * (1 - w[c]));
    EXPECT_LE(std::abs(counts[c] - n * w[c]), 3 * sd);
  }
}

TEST(Mixture, DeterministicPerSeed) {
  const auto spec = mixture(2, 2, {0, 0, 3, 3}, 0.5, {0.5, 0.5}, 7);
  EXPECT_EQ(generate_mixture(spec, 100).points, generate_mixture(spec, 100).points);
  auto other = spec;
  other.seed = 8;
  EXPECT_NE(generate_mixture(spec, 100).points, generate_mixture(other, 100).points);
}

TEST(Mixture, InvalidSpecs) {
  EXPECT_THROW(generate_mixture(mixture(2, 1, {0, 1}, 1.0, {0.5, 0.6}), 10), Error);
  EXPECT_THROW(generate_mixture(mixture(2, 1, {0, 1}, 1.0, {1.5, -0.5}), 10), Error);
  EXPECT_THROW(generate_mixture(mixture(2, 1, {0}, 1.0, {0.5, 0.5}), 10), Error);
  EXPECT_THROW(generate_mixture(mixture(1, 1, {0}, -1.0, {1.0}), 10), Error);
}

TEST(Csv, PlainNumeric) {
  const auto ds = parse_points_csv("0.1,0.2\n0.3,0.4", false);
  EXPECT_EQ(ds.points, PointSet(2, 2, {0.1, 0.2, 0.3, 0.4}));
  EXPECT_FALSE(ds.labels.has_value());
  EXPECT_TRUE(ds.column_names.empty());
}

TEST(Csv, HeaderSkippedAndLabelsParsed) {
  const auto ds = parse_points_csv("x,y,class\r\n1,2,cat\r\n3,4,\"dog, big\"\r\n5,6,cat\r\n", true);
  EXPECT_EQ(ds.points.size(), 3u);
  EXPECT_EQ(ds.points.dim(), 2u);
  EXPECT_EQ(ds.column_names, (std::vector<std::string>{"x", "y", "class"}));
  ASSERT_TRUE(ds.labels.has_value());
  EXPECT_EQ(*ds.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.label_names, (std::vector<std::string>{"cat", "dog, big"}));
}

TEST(Csv, Diagnostics) {
  const std::string ragged = error_message("1,2\n3\n");
  EXPECT_NE(ragged.find("row 2"), std::string::npos) << ragged;
  const std::string bad = error_message("1,2\n3,abc\n");
  EXPECT_NE(bad.find("row 2"), std::string::npos) << bad;
  EXPECT_NE(bad.find("column 2"), std::string::npos) << bad;
  error_message("");
  EXPECT_THROW(load_points_csv("/nonexistent/file.csv", false), Error);
}

TEST(Csv, Iris) {
  const auto ds = load_points_csv(std::string(GRIDSHIFT_DATA_DIR) + "/iris.csv", true);
  EXPECT_EQ(ds.points.size(), 150u);
  EXPECT_EQ(ds.points.dim(), 4u);
  ASSERT_TRUE(ds.labels.has_value());
  EXPECT_EQ(ds.label_names.size(), 3u);
}

TEST(Csv, WriteReadRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "gridshift_roundtrip.csv").string();
  const PointSet pts(3, 2, {0.1, 1e-17, -3.25, 1.0 / 3.0, 7.0, 8.5});
  write_points_csv(path, pts, {2, 0, 2});
  const auto ds = load_points_csv(path, true);
  EXPECT_EQ(ds.points, pts);
  EXPECT_EQ(*ds.labels, (std::vector<int>{0, 1, 0}));
  std::filesystem::remove(path);
}

TEST(Stats, SlopeAndMedian) {
  const std::vector<double> x{1, 10, 100, 1000}, y{3, 300, 30000, 3000000};
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{4, 1, 2, 3}), 2.5);
}

TEST(Sweep, ConstantLabelsGiveConstantAri) {
  const auto data = generate_mixture(mixture(2, 2, {0, 0, 4, 4}, 0.3, {0.5, 0.5}, 1), 100);
  const std::vector<int> constant(100, 0);
  // Bandwidths below the blob gap; a single predicted cluster would match
  // the constant labeling exactly and score 1.
  const auto rows = sweep_bandwidth(data.points, constant, Engine::MeanShiftPP, {0.1, 0.2, 0.5, 1.0});
  for (const auto& r : rows) {
    EXPECT_GT(r.k, 1);
    EXPECT_EQ(r.ari, 0.0);
  }
}

TEST(Sweep, SmallBandwidthOverSegments) {
  const auto data = generate_mixture(mixture(2, 2, {0, 0, 2, 0}, 0.05, {0.5, 0.5}, 3), 200);
  const auto rows = sweep_bandwidth(data.points, data.labels, Engine::MeanShiftPP, {0.005, 0.3});
  EXPECT_GT(rows[0].k, 10);
  EXPECT_LT(rows[0].ari, rows[1].ari);
  EXPECT_EQ(rows[1].ari, 1.0);
  EXPECT_TRUE(rows[1].best);
  EXPECT_FALSE(rows[0].best);
}

TEST(Sweep, Errors) {
  const PointSet pts(2, 1, {0, 1});
  EXPECT_THROW(sweep_bandwidth(pts, {0, 1}, Engine::MeanShiftPP, {}), Error);
  EXPECT_THROW(sweep_bandwidth(pts, {0}, Engine::MeanShiftPP, {1.0}), Error);
}

TEST(LinearGrid, InclusiveEnds) {
  const auto g = linear_grid(0.1, 2.0, 0.1);
  ASSERT_EQ(g.size(), 20u);
  EXPECT_DOUBLE_EQ(g.front(), 0.1);
  EXPECT_NEAR(g.back(), 2.0, 1e-12);
  EXPECT_THROW(linear_grid(1.0, 0.0, 0.1), Error);
}

TEST(Bench, RecordsAndValidation) {
  const auto spec = mixture(2, 2, {0, 0, 3, 3}, 0.3, {0.5, 0.5}, 5);
  const auto report = bench_scaling({Engine::MeanShiftPP}, {100, 200, 400, 800}, spec, 0.5);
  ASSERT_EQ(report.records.size(), 4u);
  for (const auto& r : report.records) {
    EXPECT_GT(r.wall_time, 0.0);
    EXPECT_FALSE(r.censored);
    ASSERT_TRUE(r.ari.has_value());
  }
  EXPECT_EQ(report.slopes.count(Engine::MeanShiftPP), 1u);
  EXPECT_THROW(bench_scaling({Engine::MeanShiftPP}, {100, 200, 400}, spec, 0.5), Error);
  EXPECT_THROW(bench_scaling({Engine::MeanShiftPP}, {100, 200, 200, 400}, spec, 0.5), Error);
  BenchOptions two;
  two.repeats = 2;
  EXPECT_THROW(bench_scaling({Engine::MeanShiftPP}, {100, 200, 300, 400}, spec, 0.5, two), Error);
}

TEST(Bench, WallCapCensorsLargerSizes) {
  const auto spec = mixture(1, 2, {0, 0}, 1.0, {1.0}, 5);
  BenchOptions opts;
  opts.wall_cap = 1e-6;
  opts.eta = 1e-300;
  const auto report = bench_scaling({Engine::MeanShift}, {400, 800, 1600, 3200}, spec, 0.05, opts);
  for (const auto& r : report.records) EXPECT_TRUE(r.censored);
  EXPECT_EQ(report.slopes.count(Engine::MeanShift), 0u);
  EXPECT_FALSE(report.warnings.empty());
}

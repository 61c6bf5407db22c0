#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "gridshift/error.hpp"
#include "gridshift/image.hpp"
#include "gridshift/metrics.hpp"
#include "gridshift/segment.hpp"

using namespace gridshift;
namespace fs = std::filesystem;

namespace {

ShiftConfig with_h(double h) {
  ShiftConfig cfg;
  cfg.h = h;
  return cfg;
}

Image two_blocks() {
  Image img(8, 6, Rgb{20, 40, 200});
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 3; ++x) img.at(x, y) = Rgb{240, 200, 10};
  }
  return img;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gridshift_seg_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(Features, RgbAndRgbXY) {
  const Image red(1, 1, Rgb{255, 0, 0});
  EXPECT_EQ(image_to_features(red, FeatureMode::Rgb), PointSet(1, 3, {255, 0, 0}));

  const Image pair(2, 1, Rgb{1, 2, 3});
  const PointSet f = image_to_features(pair, FeatureMode::RgbXY);
  ASSERT_EQ(f.dim(), 5u);
  EXPECT_NE(f(0, 3), f(1, 3));
  EXPECT_DOUBLE_EQ(f(1, 3) - f(0, 3), default_spatial_scale(pair));
  EXPECT_DOUBLE_EQ(default_spatial_scale(pair), 127.5);
}

TEST(Features, RowIndexingContract) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 255);
  Image img(7, 5);
  for (auto& p : img.pixels) p = Rgb{static_cast<std::uint8_t>(u(rng)), static_cast<std::uint8_t>(u(rng)),
                                     static_cast<std::uint8_t>(u(rng))};
  const PointSet f = image_to_features(img, FeatureMode::RgbXY, 2.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t x = i % 7, y = i / 7;
    EXPECT_EQ(f(i, 0), img.at(x, y).r);
    EXPECT_EQ(f(i, 2), img.at(x, y).b);
    EXPECT_EQ(f(i, 3), 2.0 * x);
    EXPECT_EQ(f(i, 4), 2.0 * y);
  }
  EXPECT_THROW(image_to_features(Image(), FeatureMode::Rgb), Error);
  EXPECT_THROW(image_to_features(img, FeatureMode::RgbXY, 0.0), Error);
  EXPECT_THROW(parse_feature_mode("lab"), Error);
  EXPECT_EQ(parse_feature_mode(feature_mode_name(FeatureMode::RgbXY)), FeatureMode::RgbXY);
}

TEST(Segment, FlatImageOneSegment) {
  const auto r = segment_image(Image(9, 4, Rgb{7, 8, 9}), with_h(16));
  EXPECT_EQ(r.map.k, 1);
  EXPECT_EQ(r.map.labels.size(), 36u);
  EXPECT_DOUBLE_EQ(r.map.mean_color(0, 2), 9.0);
}

TEST(Segment, TwoBlocksSeparate) {
  const Image img = two_blocks();
  for (Engine e : {Engine::MeanShiftPP, Engine::MeanShift}) {
    SegmentOptions opts;
    opts.engine = e;
    const auto r = segment_image(img, with_h(16), opts);
    ASSERT_EQ(r.map.k, 2);
    for (std::size_t y = 0; y < 6; ++y) {
      for (std::size_t x = 0; x < 8; ++x) EXPECT_EQ(r.map.labels[y * 8 + x], x < 3 ? 0 : 1);
    }
    EXPECT_EQ(recolor(img, r.map), img);
  }
}

TEST(Segment, PermutationStableQuality) {
  const Image img = two_blocks();
  const auto a = segment_image(img, with_h(16)).map;
  std::vector<int> swapped(a.labels);
  for (int& l : swapped) l = 1 - l;
  EXPECT_EQ(adjusted_rand_index(a.labels, make_segment_map(img, swapped).labels), 1.0);
}

TEST(Recolor, RoundsHalfUp) {
  Image img(2, 1);
  img.at(0, 0) = Rgb{10, 10, 10};
  img.at(1, 0) = Rgb{11, 11, 11};
  const SegmentMap seg = make_segment_map(img, {0, 0});
  EXPECT_DOUBLE_EQ(seg.mean_color(0, 0), 10.5);
  const Image out = recolor(img, seg);
  EXPECT_EQ(out.at(0, 0), (Rgb{11, 11, 11}));
  EXPECT_EQ(out.at(1, 0), (Rgb{11, 11, 11}));
  EXPECT_THROW(recolor(Image(3, 1), seg), Error);
}

TEST(SegmentMap, DenseIdsAndMeans) {
  Image img(3, 1);
  img.at(0, 0) = Rgb{0, 0, 0};
  img.at(1, 0) = Rgb{100, 0, 0};
  img.at(2, 0) = Rgb{50, 0, 0};
  const SegmentMap seg = make_segment_map(img, {9, -4, 9});
  EXPECT_EQ(seg.k, 2);
  EXPECT_EQ(seg.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_DOUBLE_EQ(seg.mean_color(0, 0), 25.0);
  EXPECT_THROW(make_segment_map(img, {0, 0}), Error);
}

TEST(Downsample, BoxFilter) {
  Image img(5, 3);
  img.at(0, 0) = Rgb{1, 0, 0};
  img.at(1, 0) = Rgb{2, 0, 0};
  img.at(0, 1) = Rgb{2, 0, 0};
  img.at(1, 1) = Rgb{1, 255, 0};
  const Image d = downsample2(img);
  EXPECT_EQ(d.width, 2u);
  EXPECT_EQ(d.height, 1u);
  EXPECT_EQ(d.at(0, 0), (Rgb{2, 64, 0}));  // 1.5 -> 2, 63.75 -> 64
  EXPECT_THROW(downsample2(Image(1, 4)), Error);
}

TEST_F(TempDir, ImageRoundTrips) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 255);
  Image img(13, 7);
  for (auto& p : img.pixels) p = Rgb{static_cast<std::uint8_t>(u(rng)), static_cast<std::uint8_t>(u(rng)),
                                     static_cast<std::uint8_t>(u(rng))};
  write_image(path("a.png"), img);
  write_image(path("a.ppm"), img);
  EXPECT_EQ(read_image(path("a.png")), img);
  EXPECT_EQ(read_image(path("a.ppm")), img);
  EXPECT_EQ(read_png(path("a.png")), img);
  EXPECT_EQ(read_ppm(path("a.ppm")), img);

  std::vector<int> labels(13 * 7);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i * 701 % 65536);
  write_pgm16(path("l.pgm"), 13, 7, labels);
  std::size_t w = 0, h = 0;
  EXPECT_EQ(read_pgm16(path("l.pgm"), w, h), labels);
  EXPECT_EQ(w, 13u);
  EXPECT_EQ(h, 7u);
}

TEST_F(TempDir, ImageErrors) {
  EXPECT_THROW(read_image(path("missing.png")), Error);
  std::ofstream(path("junk.png")) << "not an image";
  EXPECT_THROW(read_image(path("junk.png")), Error);
  std::ofstream(path("short.ppm"), std::ios::binary) << "P6\n4 4\n255\nabc";
  EXPECT_THROW(read_ppm(path("short.ppm")), Error);
  try {
    read_image(path("junk.png"));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
}

TEST_F(TempDir, SegmentOutputs) {
  const Image img = two_blocks();
  const auto seg = segment_image(img, with_h(16)).map;
  write_segment_outputs(path("seg"), seg, 16, FeatureMode::Rgb);
  std::size_t w = 0, h = 0;
  EXPECT_EQ(read_pgm16(path("seg.labels.pgm"), w, h), seg.labels);
  std::ifstream in(path("seg.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["h"], 16.0);
  EXPECT_EQ(j["mode"], "rgb");
  EXPECT_EQ(j["mean_colors"].size(), 2u);
  EXPECT_EQ(j["mean_colors"][0][0], 240.0);
}

TEST(BundledImages, LoadAtExpectedSizes) {
  for (const char* name : {"chelsea.ppm", "coffee.ppm", "astronaut.ppm", "rocket.ppm", "chelsea.png"}) {
    const Image img = read_image(std::string(GRIDSHIFT_DATA_DIR) + "/images/" + name);
    EXPECT_LE(img.width, 150u) << name;
    EXPECT_LE(img.height, 125u) << name;
  }
}

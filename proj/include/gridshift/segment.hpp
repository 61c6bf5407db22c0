#pragma once

// Unsupervised image segmentation: cluster pixels in RGB (or RGB + scaled
// position) space, one cluster per segment.

#include <optional>
#include <string>
#include <vector>

#include "gridshift/image.hpp"
#include "gridshift/modeseek.hpp"

namespace gridshift {

enum class FeatureMode { Rgb, RgbXY };

FeatureMode parse_feature_mode(const std::string& name);
const char* feature_mode_name(FeatureMode mode);

// Pixel (x, y) scale used by RgbXY when none is given: 255 / max(width, height).
double default_spatial_scale(const Image& img);

// Row i is pixel (i % width, i / width). Rgb: n x 3 in [0, 255]. RgbXY: n x 5
// with x, y multiplied by `spatial_scale`.
PointSet image_to_features(const Image& img, FeatureMode mode, std::optional<double> spatial_scale = std::nullopt);

struct SegmentMap {
  std::size_t width = 0, height = 0;
  std::vector<int> labels;        // row-major, dense in [0, k)
  int k = 0;
  std::vector<double> mean_colors;  // k x 3

  double mean_color(int segment, int channel) const { return mean_colors[segment * 3 + channel]; }
};

struct SegmentOptions {
  FeatureMode mode = FeatureMode::Rgb;
  Engine engine = Engine::MeanShiftPP;
  std::optional<double> spatial_scale;
};

struct SegmentResult {
  SegmentMap map;
  ShiftTrace trace;
};

SegmentResult segment_image(const Image& img, const ShiftConfig& cfg, const SegmentOptions& opts = {});

// Builds a SegmentMap from any per-pixel labeling; ids are re-densified.
SegmentMap make_segment_map(const Image& img, const std::vector<int>& labels);

// Each pixel replaced by its segment's mean color, rounded half-up.
Image recolor(const Image& img, const SegmentMap& seg);

// Writes `<prefix>.labels.pgm` (16-bit) and `<prefix>.json` {schema, k, mean_colors, h, mode, width, height}.
void write_segment_outputs(const std::string& prefix, const SegmentMap& seg, double h, FeatureMode mode);

}  // namespace gridshift

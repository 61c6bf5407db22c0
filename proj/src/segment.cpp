#include "gridshift/segment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "gridshift/error.hpp"

namespace gridshift {

FeatureMode parse_feature_mode(const std::string& name) {
  if (name == "rgb") return FeatureMode::Rgb;
  if (name == "rgbxy") return FeatureMode::RgbXY;
  throw Error(ErrorCode::InvalidArgument, "unknown feature mode '" + name + "' (expected rgb or rgbxy)");
}

const char* feature_mode_name(FeatureMode mode) { return mode == FeatureMode::Rgb ? "rgb" : "rgbxy"; }

double default_spatial_scale(const Image& img) {
  img.validate();
  return 255.0 / static_cast<double>(std::max(img.width, img.height));
}

PointSet image_to_features(const Image& img, FeatureMode mode, std::optional<double> spatial_scale) {
  img.validate();
  const std::size_t d = mode == FeatureMode::Rgb ? 3 : 5;
  const double s = spatial_scale.value_or(default_spatial_scale(img));
  if (mode == FeatureMode::RgbXY && !(s > 0.0 && std::isfinite(s))) {
    throw Error(ErrorCode::InvalidArgument, "spatial scale must be positive");
  }
  PointSet out(img.pixels.size(), d);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    auto row = out.row(i);
    row[0] = img.pixels[i].r;
    row[1] = img.pixels[i].g;
    row[2] = img.pixels[i].b;
    if (mode == FeatureMode::RgbXY) {
      row[3] = static_cast<double>(i % img.width) * s;
      row[4] = static_cast<double>(i / img.width) * s;
    }
  }
  return out;
}

SegmentMap make_segment_map(const Image& img, const std::vector<int>& labels) {
  img.validate();
  if (labels.size() != img.pixels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match pixel count");
  }
  SegmentMap seg;
  seg.width = img.width;
  seg.height = img.height;
  seg.labels.resize(labels.size());
  std::unordered_map<int, int> dense;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    seg.labels[i] = dense.try_emplace(labels[i], static_cast<int>(dense.size())).first->second;
  }
  seg.k = static_cast<int>(dense.size());
  seg.mean_colors.assign(static_cast<std::size_t>(seg.k) * 3, 0.0);
  std::vector<std::size_t> sizes(seg.k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = seg.labels[i];
    ++sizes[c];
    seg.mean_colors[c * 3 + 0] += img.pixels[i].r;
    seg.mean_colors[c * 3 + 1] += img.pixels[i].g;
    seg.mean_colors[c * 3 + 2] += img.pixels[i].b;
  }
  for (int c = 0; c < seg.k; ++c) {
    for (int ch = 0; ch < 3; ++ch) seg.mean_colors[c * 3 + ch] /= static_cast<double>(sizes[c]);
  }
  return seg;
}

SegmentResult segment_image(const Image& img, const ShiftConfig& cfg, const SegmentOptions& opts) {
  const PointSet features = image_to_features(img, opts.mode, opts.spatial_scale);
  ClusterResult run = run_engine(opts.engine, features, cfg);
  return SegmentResult{make_segment_map(img, run.labeling.labels), std::move(run.trace)};
}

Image recolor(const Image& img, const SegmentMap& seg) {
  img.validate();
  if (seg.width != img.width || seg.height != img.height || seg.labels.size() != img.pixels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "segment map does not match image dimensions");
  }
  const auto channel = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  };
  Image out(img.width, img.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const int c = seg.labels[i];
    if (c < 0 || c >= seg.k) throw Error(ErrorCode::OutOfRange, "segment id out of range");
    out.pixels[i] = Rgb{channel(seg.mean_color(c, 0)), channel(seg.mean_color(c, 1)), channel(seg.mean_color(c, 2))};
  }
  return out;
}

void write_segment_outputs(const std::string& prefix, const SegmentMap& seg, double h, FeatureMode mode) {
  write_pgm16(prefix + ".labels.pgm", seg.width, seg.height, seg.labels);
  nlohmann::json colors = nlohmann::json::array();
  for (int c = 0; c < seg.k; ++c) colors.push_back({seg.mean_color(c, 0), seg.mean_color(c, 1), seg.mean_color(c, 2)});
  const nlohmann::json doc = {{"schema", 1},           {"k", seg.k},          {"mean_colors", colors},
                              {"h", h},                {"mode", feature_mode_name(mode)},
                              {"width", seg.width},    {"height", seg.height}};
  std::ofstream out(prefix + ".json");
  if (!out) throw Error(ErrorCode::Io, "cannot write " + prefix + ".json");
  out << doc.dump(2) << '\n';
}

}  // namespace gridshift

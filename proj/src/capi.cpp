#include "gridshift/gridshift.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "gridshift/bench.hpp"
#include "gridshift/datasets.hpp"
#include "gridshift/density.hpp"
#include "gridshift/error.hpp"
#include "gridshift/metrics.hpp"
#include "gridshift/modeseek.hpp"
#include "gridshift/segment.hpp"
#include "gridshift/track.hpp"

namespace gs = gridshift;

struct gs_points {
  gs::PointSet value;
};

struct gs_labels {
  std::vector<int> value;
  std::vector<std::string> names;
};

struct gs_result {
  gs::ClusterResult value;
};

struct gs_density {
  gs::DensityEstimate value;
};

struct gs_image {
  gs::Image value;
};

struct gs_segmentation {
  gs::SegmentMap map;
  gs::ShiftTrace trace;
};

struct gs_preview {
  gs::ClusterPreview value;
  double h;
};

struct gs_tracker {
  gs::TrackState state;
  gs::TrackConfig cfg;
};

struct gs_bench_report {
  gs::BenchReport value;
};

namespace {

thread_local std::string g_last_error;

class NullArgument : public std::exception {
 public:
  explicit NullArgument(const char* name) : msg_(std::string("required argument '") + name + "' is NULL") {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

class ShortBuffer : public std::exception {
 public:
  ShortBuffer(std::size_t need, std::size_t have)
      : msg_("buffer holds " + std::to_string(have) + " elements, need " + std::to_string(need)) {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

class Missing : public std::exception {
 public:
  explicit Missing(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

gs_status map_code(gs::ErrorCode code) {
  switch (code) {
    case gs::ErrorCode::InvalidArgument: return GS_ERR_INVALID_ARGUMENT;
    case gs::ErrorCode::InvalidBandwidth: return GS_ERR_INVALID_BANDWIDTH;
    case gs::ErrorCode::InvalidPoint: return GS_ERR_INVALID_POINT;
    case gs::ErrorCode::DimensionMismatch: return GS_ERR_DIMENSION_MISMATCH;
    case gs::ErrorCode::OutOfRange: return GS_ERR_OUT_OF_RANGE;
    case gs::ErrorCode::Io: return GS_ERR_IO;
    case gs::ErrorCode::Parse: return GS_ERR_PARSE;
  }
  return GS_ERR_INTERNAL;
}

template <class Fn>
gs_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return GS_OK;
  } catch (const gs::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const NullArgument& e) {
    g_last_error = e.what();
    return GS_ERR_NULL_ARGUMENT;
  } catch (const ShortBuffer& e) {
    g_last_error = e.what();
    return GS_ERR_BUFFER_TOO_SMALL;
  } catch (const Missing& e) {
    g_last_error = e.what();
    return GS_ERR_NOT_FOUND;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GS_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GS_ERR_INTERNAL;
  }
}

template <class T>
T& need(T* p, const char* name) {
  if (!p) throw NullArgument(name);
  return *p;
}

template <class T>
const T& need(const T* p, const char* name) {
  if (!p) throw NullArgument(name);
  return *p;
}

const char* need_str(const char* p, const char* name) {
  if (!p) throw NullArgument(name);
  return p;
}

template <class Src, class Dst>
void copy_out(const Src& src, Dst* out, std::size_t capacity) {
  if (!out) throw NullArgument("out");
  if (capacity < src.size()) throw ShortBuffer(src.size(), capacity);
  std::copy(src.begin(), src.end(), out);
}

std::vector<int> to_ints(const int32_t* values, std::size_t n, const char* name) {
  if (!values && n > 0) throw NullArgument(name);
  return std::vector<int>(values, values + n);
}

gs::ShiftConfig to_config(const gs_shift_config& c) {
  gs::ShiftConfig cfg;
  cfg.h = c.h;
  if (c.eta > 0.0) cfg.eta = c.eta;
  cfg.max_iters = c.max_iters;
  cfg.kernel = c.kernel == GS_KERNEL_GAUSSIAN ? gs::Kernel::Gaussian : gs::Kernel::Flat;
  cfg.threads = c.threads;
  cfg.time_limit = c.time_limit;
  cfg.validate();
  return cfg;
}

gs::Engine to_engine(gs_engine e) {
  switch (e) {
    case GS_ENGINE_MEANSHIFTPP: return gs::Engine::MeanShiftPP;
    case GS_ENGINE_MEANSHIFT: return gs::Engine::MeanShift;
  }
  throw gs::Error(gs::ErrorCode::InvalidArgument, "unknown engine");
}

gs_engine from_engine(gs::Engine e) { return e == gs::Engine::MeanShiftPP ? GS_ENGINE_MEANSHIFTPP : GS_ENGINE_MEANSHIFT; }

gs::FeatureMode to_mode(gs_feature_mode m) {
  switch (m) {
    case GS_FEATURES_RGB: return gs::FeatureMode::Rgb;
    case GS_FEATURES_RGBXY: return gs::FeatureMode::RgbXY;
  }
  throw gs::Error(gs::ErrorCode::InvalidArgument, "unknown feature mode");
}

gs::GaussianMixtureSpec to_spec(const gs_mixture_spec& s) {
  gs::GaussianMixtureSpec spec;
  spec.k = s.k;
  spec.d = s.d;
  if (!s.centers || !s.weights) throw NullArgument("spec.centers/spec.weights");
  spec.centers.assign(s.centers, s.centers + s.k * s.d);
  spec.weights.assign(s.weights, s.weights + s.k);
  spec.sigma = s.sigma;
  spec.seed = s.seed;
  spec.validate();
  return spec;
}

void fill_info(const gs::TrackState& st, gs_track_info* info) {
  if (!info) return;
  info->cx = st.window.cx;
  info->cy = st.window.cy;
  info->w = st.window.w;
  info->h = st.window.h_px;
  info->lost = st.lost ? 1 : 0;
  info->match_count = st.last_match_count;
  info->iterations = st.last_iterations;
  info->bin_count = st.bins.bins.size();
}

}  // namespace

extern "C" {

const char* gs_status_string(gs_status status) {
  switch (status) {
    case GS_OK: return "ok";
    case GS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GS_ERR_INVALID_BANDWIDTH: return "invalid bandwidth";
    case GS_ERR_INVALID_POINT: return "invalid point";
    case GS_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case GS_ERR_OUT_OF_RANGE: return "out of range";
    case GS_ERR_IO: return "i/o error";
    case GS_ERR_PARSE: return "parse error";
    case GS_ERR_NULL_ARGUMENT: return "null argument";
    case GS_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case GS_ERR_NOT_FOUND: return "not found";
    case GS_ERR_OUT_OF_MEMORY: return "out of memory";
    case GS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gs_last_error(void) { return g_last_error.c_str(); }

const char* gs_version(void) { return "0.1.0"; }

/* points / labels */

gs_status gs_points_create(const double* data, size_t n, size_t d, gs_points** out) {
  return guarded([&] {
    need(out, "out");
    if (!data) throw NullArgument("data");
    gs::PointSet ps(n, d, std::vector<double>(data, data + n * d));
    ps.validate();
    *out = new gs_points{std::move(ps)};
  });
}

void gs_points_free(gs_points* points) { delete points; }

gs_status gs_points_shape(const gs_points* points, size_t* n, size_t* d) {
  return guarded([&] {
    const auto& p = need(points, "points").value;
    if (n) *n = p.size();
    if (d) *d = p.dim();
  });
}

gs_status gs_points_copy(const gs_points* points, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(points, "points").value.data(), out, capacity); });
}

gs_status gs_points_load_csv(const char* path, int last_column_is_label, gs_points** points, gs_labels** labels) {
  return guarded([&] {
    need_str(path, "path");
    need(points, "points");
    gs::CsvDataset ds = gs::load_points_csv(path, last_column_is_label != 0);
    auto p = std::make_unique<gs_points>(gs_points{std::move(ds.points)});
    if (labels) {
      *labels = ds.labels ? new gs_labels{std::move(*ds.labels), std::move(ds.label_names)} : nullptr;
    }
    *points = p.release();
  });
}

gs_status gs_points_write_csv(const char* path, const gs_points* points, const gs_labels* labels) {
  return guarded([&] {
    gs::write_points_csv(need_str(path, "path"), need(points, "points").value,
                         labels ? labels->value : std::vector<int>{});
  });
}

gs_status gs_labels_create(const int32_t* values, size_t n, gs_labels** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_labels{to_ints(values, n, "values"), {}};
  });
}

void gs_labels_free(gs_labels* labels) { delete labels; }

gs_status gs_labels_size(const gs_labels* labels, size_t* n) {
  return guarded([&] { need(n, "n") = need(labels, "labels").value.size(); });
}

gs_status gs_labels_copy(const gs_labels* labels, int32_t* out, size_t capacity) {
  return guarded([&] { copy_out(need(labels, "labels").value, out, capacity); });
}

gs_status gs_labels_name(const gs_labels* labels, int32_t id, const char** name) {
  return guarded([&] {
    const auto& l = need(labels, "labels");
    need(name, "name");
    if (id < 0 || static_cast<std::size_t>(id) >= l.names.size()) throw Missing("no name for label id");
    *name = l.names[id].c_str();
  });
}

/* mixture */

gs_status gs_generate_mixture(const gs_mixture_spec* spec, size_t n, gs_points** points, gs_labels** labels) {
  return guarded([&] {
    need(points, "points");
    gs::LabeledPoints lp = gs::generate_mixture(to_spec(need(spec, "spec")), n);
    auto p = std::make_unique<gs_points>(gs_points{std::move(lp.points)});
    if (labels) *labels = new gs_labels{std::move(lp.labels), {}};
    *points = p.release();
  });
}

/* mode seeking */

void gs_shift_config_init(gs_shift_config* cfg) {
  if (!cfg) return;
  const gs::ShiftConfig def;
  cfg->h = def.h;
  cfg->eta = 0.0;
  cfg->max_iters = def.max_iters;
  cfg->kernel = GS_KERNEL_FLAT;
  cfg->threads = def.threads;
  cfg->time_limit = 0.0;
}

gs_status gs_cluster(gs_engine engine, const gs_points* points, const gs_shift_config* cfg, gs_result** out) {
  return guarded([&] {
    need(out, "out");
    auto r = gs::run_engine(to_engine(engine), need(points, "points").value, to_config(need(cfg, "cfg")));
    *out = new gs_result{std::move(r)};
  });
}

gs_status gs_extract_clusters(const gs_points* converged, double h, gs_result** out) {
  return guarded([&] {
    need(out, "out");
    const auto& c = need(converged, "converged").value;
    c.validate();
    gs::ClusterResult r;
    r.labeling = gs::extract_clusters(c, h);
    r.converged = c;
    r.trace.converged = true;
    *out = new gs_result{std::move(r)};
  });
}

gs_status gs_meanshiftpp_step(const gs_points* points, const gs_shift_config* cfg, gs_points** out,
                              double* total_movement) {
  return guarded([&] {
    need(out, "out");
    auto step = gs::meanshiftpp_step(need(points, "points").value, to_config(need(cfg, "cfg")));
    if (total_movement) *total_movement = step.total_movement;
    *out = new gs_points{std::move(step.points)};
  });
}

void gs_result_free(gs_result* result) { delete result; }

gs_status gs_result_info_get(const gs_result* result, gs_result_info* info) {
  return guarded([&] {
    const auto& r = need(result, "result").value;
    auto& i = need(info, "info");
    i.n = r.converged.size();
    i.d = r.converged.dim();
    i.k = r.labeling.k;
    i.iterations = r.trace.iterations;
    i.converged = r.trace.converged ? 1 : 0;
    i.timed_out = r.trace.timed_out ? 1 : 0;
  });
}

gs_status gs_result_labels(const gs_result* result, int32_t* out, size_t capacity) {
  return guarded([&] { copy_out(need(result, "result").value.labeling.labels, out, capacity); });
}

gs_status gs_result_modes(const gs_result* result, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(result, "result").value.labeling.modes.data(), out, capacity); });
}

gs_status gs_result_converged(const gs_result* result, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(result, "result").value.converged.data(), out, capacity); });
}

gs_status gs_result_movement(const gs_result* result, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(result, "result").value.trace.total_movement_per_iter, out, capacity); });
}

/* metrics */

gs_status gs_adjusted_rand_index(const int32_t* a, const int32_t* b, size_t n, double* out) {
  return guarded([&] { need(out, "out") = gs::adjusted_rand_index(to_ints(a, n, "a"), to_ints(b, n, "b")); });
}

gs_status gs_adjusted_mutual_information(const int32_t* a, const int32_t* b, size_t n, double* out) {
  return guarded(
      [&] { need(out, "out") = gs::adjusted_mutual_information(to_ints(a, n, "a"), to_ints(b, n, "b")); });
}

gs_status gs_fowlkes_mallows(const int32_t* a, const int32_t* b, size_t n, double* out) {
  return guarded([&] { need(out, "out") = gs::fowlkes_mallows(to_ints(a, n, "a"), to_ints(b, n, "b")); });
}

/* density */

gs_status gs_density_fit(const gs_points* points, double h, gs_density** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_density{gs::fit_density(need(points, "points").value, h)};
  });
}

void gs_density_free(gs_density* density) { delete density; }

gs_status gs_density_evaluate(const gs_density* density, const double* x, size_t d, double* out) {
  return guarded([&] {
    if (!x) throw NullArgument("x");
    need(out, "out") = gs::evaluate(need(density, "density").value, std::span<const double>(x, d));
  });
}

gs_status gs_rate_experiment(const char* target, size_t dim, const size_t* sample_sizes, size_t count, double alpha,
                             uint64_t seed, double* bandwidths, double* sup_errors, double* fitted_exponent) {
  return guarded([&] {
    const auto t = gs::TargetDensity::parse(need_str(target, "target"), dim);
    if (!sample_sizes) throw NullArgument("sample_sizes");
    const auto report = gs::rate_experiment(t, std::vector<std::size_t>(sample_sizes, sample_sizes + count), alpha,
                                            seed);
    if (bandwidths) std::copy(report.bandwidths.begin(), report.bandwidths.end(), bandwidths);
    if (sup_errors) std::copy(report.sup_errors.begin(), report.sup_errors.end(), sup_errors);
    if (fitted_exponent) *fitted_exponent = report.fitted_exponent;
  });
}

/* images */

gs_status gs_image_create(const uint8_t* rgb, size_t width, size_t height, gs_image** out) {
  return guarded([&] {
    need(out, "out");
    if (!rgb) throw NullArgument("rgb");
    gs::Image img(width, height);
    img.validate();
    std::memcpy(img.pixels.data(), rgb, width * height * 3);
    *out = new gs_image{std::move(img)};
  });
}

gs_status gs_image_read(const char* path, gs_image** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_image{gs::read_image(need_str(path, "path"))};
  });
}

gs_status gs_image_write(const gs_image* image, const char* path) {
  return guarded([&] { gs::write_image(need_str(path, "path"), need(image, "image").value); });
}

void gs_image_free(gs_image* image) { delete image; }

gs_status gs_image_size(const gs_image* image, size_t* width, size_t* height) {
  return guarded([&] {
    const auto& img = need(image, "image").value;
    if (width) *width = img.width;
    if (height) *height = img.height;
  });
}

gs_status gs_image_pixels(const gs_image* image, uint8_t* out, size_t capacity) {
  return guarded([&] {
    const auto& img = need(image, "image").value;
    if (!out) throw NullArgument("out");
    const std::size_t bytes = img.pixels.size() * 3;
    if (capacity < bytes) throw ShortBuffer(bytes, capacity);
    std::memcpy(out, img.pixels.data(), bytes);
  });
}

gs_status gs_image_downsample2(const gs_image* image, gs_image** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_image{gs::downsample2(need(image, "image").value)};
  });
}

gs_status gs_image_draw_window(gs_image* image, double cx, double cy, int w, int h, uint8_t r, uint8_t g,
                               uint8_t b) {
  return guarded([&] {
    if (w <= 0 || h <= 0) throw gs::Error(gs::ErrorCode::InvalidArgument, "window extent must be positive");
    gs::draw_window(need(image, "image").value, gs::Window{cx, cy, w, h}, gs::Rgb{r, g, b});
  });
}

gs_status gs_image_to_features(const gs_image* image, gs_feature_mode mode, double spatial_scale, gs_points** out) {
  return guarded([&] {
    need(out, "out");
    std::optional<double> scale;
    if (spatial_scale > 0.0) scale = spatial_scale;
    *out = new gs_points{gs::image_to_features(need(image, "image").value, to_mode(mode), scale)};
  });
}

/* segmentation */

gs_status gs_segment_image(const gs_image* image, const gs_shift_config* cfg, gs_feature_mode mode, gs_engine engine,
                           double spatial_scale, gs_segmentation** out) {
  return guarded([&] {
    need(out, "out");
    gs::SegmentOptions opts;
    opts.mode = to_mode(mode);
    opts.engine = to_engine(engine);
    if (spatial_scale > 0.0) opts.spatial_scale = spatial_scale;
    auto r = gs::segment_image(need(image, "image").value, to_config(need(cfg, "cfg")), opts);
    *out = new gs_segmentation{std::move(r.map), std::move(r.trace)};
  });
}

void gs_segmentation_free(gs_segmentation* seg) { delete seg; }

gs_status gs_segmentation_info(const gs_segmentation* seg, size_t* width, size_t* height, int32_t* k,
                               int32_t* iterations) {
  return guarded([&] {
    const auto& s = need(seg, "seg");
    if (width) *width = s.map.width;
    if (height) *height = s.map.height;
    if (k) *k = s.map.k;
    if (iterations) *iterations = s.trace.iterations;
  });
}

gs_status gs_segmentation_labels(const gs_segmentation* seg, int32_t* out, size_t capacity) {
  return guarded([&] { copy_out(need(seg, "seg").map.labels, out, capacity); });
}

gs_status gs_segmentation_mean_colors(const gs_segmentation* seg, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(seg, "seg").map.mean_colors, out, capacity); });
}

gs_status gs_segmentation_recolor(const gs_image* image, const gs_segmentation* seg, gs_image** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_image{gs::recolor(need(image, "image").value, need(seg, "seg").map)};
  });
}

gs_status gs_segmentation_write(const gs_segmentation* seg, const char* prefix, double h, gs_feature_mode mode) {
  return guarded(
      [&] { gs::write_segment_outputs(need_str(prefix, "prefix"), need(seg, "seg").map, h, to_mode(mode)); });
}

/* tracking */

gs_status gs_preview_create(const gs_image* frame0, int x, int y, int w, int h, const gs_shift_config* cfg,
                            gs_preview** out) {
  return guarded([&] {
    need(out, "out");
    const gs::ShiftConfig c = to_config(need(cfg, "cfg"));
    auto preview = gs::preview_clusters(need(frame0, "frame0").value, gs::Window::from_rect(x, y, w, h), c);
    *out = new gs_preview{std::move(preview), c.h};
  });
}

void gs_preview_free(gs_preview* preview) { delete preview; }

gs_status gs_preview_num_clusters(const gs_preview* preview, int32_t* k) {
  return guarded([&] { need(k, "k") = need(preview, "preview").value.labeling.k; });
}

gs_status gs_preview_cluster_sizes(const gs_preview* preview, size_t* out, size_t capacity) {
  return guarded([&] { copy_out(need(preview, "preview").value.sizes, out, capacity); });
}

gs_status gs_preview_mean_colors(const gs_preview* preview, double* out, size_t capacity) {
  return guarded([&] { copy_out(need(preview, "preview").value.mean_colors, out, capacity); });
}

gs_status gs_preview_image(const gs_preview* preview, gs_image** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gs_image{need(preview, "preview").value.label_image};
  });
}

void gs_track_config_init(gs_track_config* cfg) {
  if (!cfg) return;
  const gs::TrackConfig def;
  cfg->h = def.shift.h;
  cfg->center_tol = def.center_tol;
  cfg->max_inner_iters = def.max_inner_iters;
}

gs_status gs_tracker_create(const gs_image* frame0, const gs_preview* preview, const int32_t* selected,
                            size_t selected_count, const gs_track_config* cfg, gs_tracker** out) {
  return guarded([&] {
    need(out, "out");
    const auto& c = need(cfg, "cfg");
    const auto& p = need(preview, "preview");
    if (c.h != p.h) throw gs::Error(gs::ErrorCode::InvalidArgument, "tracker bandwidth differs from the preview's");
    gs::TrackConfig tc;
    tc.shift.h = c.h;
    tc.center_tol = c.center_tol;
    tc.max_inner_iters = c.max_inner_iters;
    auto state = gs::init_tracker(need(frame0, "frame0").value, p.value, c.h, to_ints(selected, selected_count, "selected"));
    *out = new gs_tracker{std::move(state), tc};
  });
}

void gs_tracker_free(gs_tracker* tracker) { delete tracker; }

gs_status gs_tracker_step(gs_tracker* tracker, const gs_image* frame, int update_bins, gs_track_info* info) {
  return guarded([&] {
    auto& t = need(tracker, "tracker");
    t.state = gs::track_frame(t.state, need(frame, "frame").value, t.cfg, update_bins != 0);
    fill_info(t.state, info);
  });
}

gs_status gs_tracker_info(const gs_tracker* tracker, gs_track_info* info) {
  return guarded([&] { fill_info(need(tracker, "tracker").state, &need(info, "info")); });
}

gs_status gs_tracker_bins(const gs_tracker* tracker, int64_t* out, size_t capacity) {
  return guarded([&] {
    std::vector<int64_t> flat;
    for (const auto& g : need(tracker, "tracker").state.bins.bins) flat.insert(flat.end(), g.coords.begin(), g.coords.end());
    copy_out(flat, out, capacity);
  });
}

/* benchmarking */

void gs_bench_options_init(gs_bench_options* opts) {
  if (!opts) return;
  const gs::BenchOptions def;
  opts->repeats = def.repeats;
  opts->wall_cap = def.wall_cap;
  opts->threads = def.threads;
  opts->eta = 0.0;
  opts->max_iters = def.max_iters;
  opts->score = def.score ? 1 : 0;
}

gs_status gs_bench_scaling(const gs_engine* engines, size_t engine_count, const size_t* n_grid, size_t n_count,
                           const gs_mixture_spec* spec, double h, const gs_bench_options* opts,
                           gs_bench_report** out) {
  return guarded([&] {
    need(out, "out");
    if (!engines || !n_grid) throw NullArgument("engines/n_grid");
    std::vector<gs::Engine> es;
    for (std::size_t i = 0; i < engine_count; ++i) es.push_back(to_engine(engines[i]));
    gs::BenchOptions o;
    if (opts) {
      o.repeats = opts->repeats;
      o.wall_cap = opts->wall_cap;
      o.threads = opts->threads;
      if (opts->eta > 0.0) o.eta = opts->eta;
      o.max_iters = opts->max_iters;
      o.score = opts->score != 0;
    }
    auto report = gs::bench_scaling(es, std::vector<std::size_t>(n_grid, n_grid + n_count),
                                    to_spec(need(spec, "spec")), h, o);
    *out = new gs_bench_report{std::move(report)};
  });
}

void gs_bench_report_free(gs_bench_report* report) { delete report; }

gs_status gs_bench_report_size(const gs_bench_report* report, size_t* records, size_t* warnings) {
  return guarded([&] {
    const auto& r = need(report, "report").value;
    if (records) *records = r.records.size();
    if (warnings) *warnings = r.warnings.size();
  });
}

gs_status gs_bench_report_record(const gs_bench_report* report, size_t index, gs_bench_record* out) {
  return guarded([&] {
    const auto& r = need(report, "report").value;
    auto& o = need(out, "out");
    if (index >= r.records.size()) throw gs::Error(gs::ErrorCode::OutOfRange, "record index out of range");
    const auto& rec = r.records[index];
    o.engine = from_engine(rec.engine);
    o.n = rec.n;
    o.d = rec.d;
    o.h = rec.h;
    o.iterations = rec.iters;
    o.k = rec.k;
    o.wall_time = rec.wall_time;
    o.has_scores = rec.ari.has_value() ? 1 : 0;
    o.ari = rec.ari.value_or(0.0);
    o.ami = rec.ami.value_or(0.0);
    o.censored = rec.censored ? 1 : 0;
  });
}

gs_status gs_bench_report_slope(const gs_bench_report* report, gs_engine engine, double* slope) {
  return guarded([&] {
    const auto& r = need(report, "report").value;
    const auto it = r.slopes.find(to_engine(engine));
    if (it == r.slopes.end()) throw Missing("no slope fitted for engine");
    need(slope, "slope") = it->second;
  });
}

gs_status gs_bench_report_warning(const gs_bench_report* report, size_t index, const char** text) {
  return guarded([&] {
    const auto& r = need(report, "report").value;
    if (index >= r.warnings.size()) throw gs::Error(gs::ErrorCode::OutOfRange, "warning index out of range");
    need(text, "text") = r.warnings[index].c_str();
  });
}

gs_status gs_sweep_bandwidth(const gs_points* points, const gs_labels* labels, gs_engine engine, const double* h_grid,
                             size_t h_count, double eta, size_t threads, gs_sweep_row* rows) {
  return guarded([&] {
    if (!h_grid && h_count > 0) throw NullArgument("h_grid");
    if (!rows) throw NullArgument("rows");
    std::optional<double> e;
    if (eta > 0.0) e = eta;
    const auto result = gs::sweep_bandwidth(need(points, "points").value, need(labels, "labels").value,
                                            to_engine(engine), std::vector<double>(h_grid, h_grid + h_count), e,
                                            threads);
    for (std::size_t i = 0; i < result.size(); ++i) {
      rows[i] = gs_sweep_row{result[i].h,     result[i].ari,       result[i].ami,         result[i].k,
                             result[i].iters, result[i].wall_time, result[i].best ? 1 : 0};
    }
  });
}

}  // extern "C"

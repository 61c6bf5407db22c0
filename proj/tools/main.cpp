// gridshift command-line tool. Talks to the library only through the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridshift/gridshift.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gs_status s, const std::string& what) {
  if (s == GS_OK) return;
  std::string msg = gs_last_error();
  if (msg.empty()) msg = gs_status_string(s);
  throw Failure(what + ": " + msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Points = Handle<gs_points, gs_points_free>;
using Labels = Handle<gs_labels, gs_labels_free>;
using Result = Handle<gs_result, gs_result_free>;
using ImagePtr = Handle<gs_image, gs_image_free>;
using Segmentation = Handle<gs_segmentation, gs_segmentation_free>;
using Preview = Handle<gs_preview, gs_preview_free>;
using Tracker = Handle<gs_tracker, gs_tracker_free>;
using BenchReport = Handle<gs_bench_report, gs_bench_report_free>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

gs_engine parse_engine(const std::string& name) {
  if (name == "meanshiftpp") return GS_ENGINE_MEANSHIFTPP;
  if (name == "meanshift") return GS_ENGINE_MEANSHIFT;
  throw Failure("unknown engine '" + name + "' (expected meanshiftpp or meanshift)");
}

const char* engine_name(gs_engine e) { return e == GS_ENGINE_MEANSHIFTPP ? "meanshiftpp" : "meanshift"; }

gs_feature_mode parse_mode(const std::string& name) {
  if (name == "rgb") return GS_FEATURES_RGB;
  if (name == "rgbxy") return GS_FEATURES_RGBXY;
  throw Failure("unknown feature mode '" + name + "' (expected rgb or rgbxy)");
}

// Options shared by every command that runs an engine.
struct ShiftFlags {
  double h = 0.0;
  double eta = 0.0;
  int max_iters = 300;
  std::string kernel = "flat";
  std::size_t threads = 0;

  void add(CLI::App* cmd, bool need_h = true) {
    auto* opt = cmd->add_option("--h", h, "Bandwidth (feature units)");
    if (need_h) opt->required();
    cmd->add_option("--eta", eta, "Convergence threshold on summed movement (default 1e-4*n*h)");
    cmd->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
    cmd->add_option("--kernel", kernel, "Baseline kernel: flat or gaussian")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads, 0 = auto (capped by GRIDSHIFT_THREADS)");
  }

  gs_shift_config config() const {
    gs_shift_config cfg;
    gs_shift_config_init(&cfg);
    cfg.h = h;
    cfg.eta = eta;
    cfg.max_iters = max_iters;
    if (kernel == "flat") cfg.kernel = GS_KERNEL_FLAT;
    else if (kernel == "gaussian") cfg.kernel = GS_KERNEL_GAUSSIAN;
    else throw Failure("unknown kernel '" + kernel + "' (expected flat or gaussian)");
    cfg.threads = threads;
    return cfg;
  }
};

struct OutputFlags {
  std::string output;
  std::string metadata_out;

  void add(CLI::App* cmd, const char* what = "Result JSON path (default stdout)") {
    cmd->add_option("--output", output, what);
    cmd->add_option("--metadata-out", metadata_out, "Write timings here instead of embedding them");
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Failure("write failed: " + path);
}

// Metadata (timings, clock time) lives outside the deterministic part of the
// document: either under "metadata" or in its own file.
void emit(json doc, json metadata, const OutputFlags& out) {
  metadata["timestamp"] = utc_timestamp();
  metadata["version"] = gs_version();
  if (out.metadata_out.empty()) {
    doc["metadata"] = std::move(metadata);
  } else {
    write_text(out.metadata_out, metadata.dump(2) + "\n");
  }
  write_text(out.output, doc.dump(2) + "\n");
}

json matrix(const std::vector<double>& flat, std::size_t cols) {
  json rows = json::array();
  for (std::size_t i = 0; i + cols <= flat.size(); i += cols) {
    rows.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                       flat.begin() + static_cast<std::ptrdiff_t>(i + cols)));
  }
  return rows;
}

std::vector<std::int32_t> label_values(const gs_labels* labels) {
  std::size_t n = 0;
  check(gs_labels_size(labels, &n), "labels");
  std::vector<std::int32_t> out(n);
  check(gs_labels_copy(labels, out.data(), n), "labels");
  return out;
}

json scores(const std::vector<std::int32_t>& truth, const std::vector<std::int32_t>& pred) {
  double ari = 0, ami = 0, fm = 0;
  check(gs_adjusted_rand_index(truth.data(), pred.data(), truth.size(), &ari), "ari");
  check(gs_adjusted_mutual_information(truth.data(), pred.data(), truth.size(), &ami), "ami");
  check(gs_fowlkes_mallows(truth.data(), pred.data(), truth.size(), &fm), "fm");
  return json{{"ari", ari}, {"ami", ami}, {"fm", fm}};
}

// ---- generate -------------------------------------------------------------

struct MixtureFlags {
  std::size_t k = 3, d = 2;
  std::vector<double> centers, weights;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--k", k, "Mixture components")->capture_default_str();
    cmd->add_option("--d", d, "Dimension")->capture_default_str();
    cmd->add_option("--centers", centers, "k*d center coordinates, row-major (default: component j at 4j on every axis)")
        ->delimiter(',');
    cmd->add_option("--weights", weights, "k component weights (default uniform)")->delimiter(',');
    cmd->add_option("--sigma", sigma, "Isotropic noise scale")->capture_default_str();
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  }

  // Backing storage for the pointers inside the returned spec.
  gs_mixture_spec spec() {
    if (centers.empty()) {
      for (std::size_t j = 0; j < k; ++j) centers.insert(centers.end(), d, 4.0 * static_cast<double>(j));
    }
    if (weights.empty()) weights.assign(k, 1.0 / static_cast<double>(k));
    if (centers.size() != k * d) throw Failure("--centers needs k*d = " + std::to_string(k * d) + " values");
    if (weights.size() != k) throw Failure("--weights needs k = " + std::to_string(k) + " values");
    return gs_mixture_spec{k, d, centers.data(), weights.data(), sigma, seed};
  }

  json describe() const {
    return json{{"k", k}, {"d", d}, {"centers", matrix(centers, d)}, {"weights", weights}, {"sigma", sigma},
                {"seed", seed}};
  }
};

struct GenerateCmd {
  MixtureFlags mix;
  std::size_t n = 1000;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("generate", "Sample a Gaussian mixture to CSV (last column = component)");
    mix.add(cmd);
    cmd->add_option("--n", n, "Number of points")->capture_default_str();
    cmd->add_option("--output", output, "CSV path")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    const gs_mixture_spec spec = mix.spec();
    gs_points* p = nullptr;
    gs_labels* l = nullptr;
    check(gs_generate_mixture(&spec, n, &p, &l), "generate");
    Points points(p);
    Labels labels(l);
    check(gs_points_write_csv(output.c_str(), points.get(), labels.get()), "write");
  }
};

// ---- cluster --------------------------------------------------------------

struct ClusterCmd {
  std::string input, engine = "meanshiftpp", labels_out;
  bool label_column = false;
  ShiftFlags shift;
  OutputFlags out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "Cluster a CSV point set");
    cmd->add_option("--input", input, "CSV of features")->required();
    cmd->add_flag("--label-column", label_column, "Last CSV column holds reference labels");
    cmd->add_option("--engine", engine, "meanshiftpp or meanshift")->capture_default_str();
    shift.add(cmd);
    out.add(cmd);
    cmd->add_option("--labels-out", labels_out, "Also write points with predicted labels as CSV");
    cmd->callback([this] { run(); });
  }

  void run() {
    const gs_engine e = parse_engine(engine);
    gs_points* p = nullptr;
    gs_labels* l = nullptr;
    check(gs_points_load_csv(input.c_str(), label_column ? 1 : 0, &p, label_column ? &l : nullptr), "load");
    Points points(p);
    Labels truth(l);
    const gs_shift_config cfg = shift.config();

    gs_result* r = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    check(gs_cluster(e, points.get(), &cfg, &r), "cluster");
    const double elapsed = seconds_since(t0);
    Result result(r);

    gs_result_info info;
    check(gs_result_info_get(result.get(), &info), "result");
    std::vector<std::int32_t> labels(info.n);
    std::vector<double> modes(static_cast<std::size_t>(info.k) * info.d), movement(info.iterations);
    check(gs_result_labels(result.get(), labels.data(), labels.size()), "labels");
    check(gs_result_modes(result.get(), modes.data(), modes.size()), "modes");
    check(gs_result_movement(result.get(), movement.data(), movement.size()), "movement");

    json doc{{"schema", 1},
             {"command", "cluster"},
             {"engine", engine_name(e)},
             {"h", cfg.h},
             {"n", info.n},
             {"d", info.d},
             {"k", info.k},
             {"iterations", info.iterations},
             {"converged", info.converged != 0},
             {"movement", movement},
             {"modes", matrix(modes, info.d)},
             {"labels", labels}};
    if (truth) doc["scores"] = scores(label_values(truth.get()), labels);

    if (!labels_out.empty()) {
      gs_labels* pl = nullptr;
      check(gs_labels_create(labels.data(), labels.size(), &pl), "labels");
      Labels predicted(pl);
      check(gs_points_write_csv(labels_out.c_str(), points.get(), predicted.get()), "write");
    }
    emit(std::move(doc), json{{"engine_seconds", elapsed}}, out);
  }
};

// ---- segment --------------------------------------------------------------

struct SegmentCmd {
  std::string input, mode = "rgb", engine = "meanshiftpp", prefix, recolor_out;
  double spatial_scale = 0.0;
  int downsample = 0;
  ShiftFlags shift;
  OutputFlags out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("segment", "Segment an image by clustering pixel colors");
    cmd->add_option("--input", input, "PNG or PPM image")->required();
    cmd->add_option("--mode", mode, "Feature space: rgb or rgbxy")->capture_default_str();
    cmd->add_option("--spatial-scale", spatial_scale, "rgbxy position scale (default 255/max(width,height))");
    cmd->add_option("--engine", engine, "meanshiftpp or meanshift")->capture_default_str();
    cmd->add_option("--downsample", downsample, "Halve the image this many times first")->capture_default_str();
    shift.add(cmd);
    cmd->add_option("--prefix", prefix, "Write <prefix>.labels.pgm and <prefix>.json");
    cmd->add_option("--recolor", recolor_out, "Write the mean-color rendering (PNG, or PPM by extension)");
    out.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const gs_engine e = parse_engine(engine);
    const gs_feature_mode m = parse_mode(mode);
    if (downsample < 0) throw Failure("--downsample must be >= 0");
    gs_image* raw = nullptr;
    check(gs_image_read(input.c_str(), &raw), "read");
    ImagePtr img(raw);
    for (int i = 0; i < downsample; ++i) {
      gs_image* half = nullptr;
      check(gs_image_downsample2(img.get(), &half), "downsample");
      img.reset(half);
    }
    const gs_shift_config cfg = shift.config();

    gs_segmentation* s = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    check(gs_segment_image(img.get(), &cfg, m, e, spatial_scale, &s), "segment");
    const double elapsed = seconds_since(t0);
    Segmentation seg(s);

    std::size_t w = 0, h = 0;
    std::int32_t k = 0, iters = 0;
    check(gs_segmentation_info(seg.get(), &w, &h, &k, &iters), "segment");
    std::vector<double> means(static_cast<std::size_t>(k) * 3);
    check(gs_segmentation_mean_colors(seg.get(), means.data(), means.size()), "segment");

    if (!prefix.empty()) check(gs_segmentation_write(seg.get(), prefix.c_str(), cfg.h, m), "write");
    if (!recolor_out.empty()) {
      gs_image* rc = nullptr;
      check(gs_segmentation_recolor(img.get(), seg.get(), &rc), "recolor");
      ImagePtr recolored(rc);
      check(gs_image_write(recolored.get(), recolor_out.c_str()), "write");
    }
    json doc{{"schema", 1},  {"command", "segment"}, {"engine", engine_name(e)}, {"mode", mode},
             {"h", cfg.h},   {"width", w},           {"height", h},               {"k", k},
             {"iterations", iters}, {"mean_colors", matrix(means, 3)}};
    emit(std::move(doc), json{{"engine_seconds", elapsed}}, out);
  }
};

// ---- track ----------------------------------------------------------------

// Frames sorted by the last run of digits in the file stem, then by name.
std::vector<fs::path> list_frames(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Failure("frames directory '" + dir + "' not found");
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && (ext == ".png" || ext == ".ppm")) frames.push_back(entry.path());
  }
  const auto number = [](const fs::path& p) -> long long {
    const std::string stem = p.stem().string();
    const auto end = stem.find_last_of("0123456789");
    if (end == std::string::npos) return -1;
    auto begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
    return std::stoll(stem.substr(begin, std::min<std::size_t>(end - begin + 1, 18)));
  };
  std::sort(frames.begin(), frames.end(), [&](const fs::path& a, const fs::path& b) {
    const long long na = number(a), nb = number(b);
    return na != nb ? na < nb : a.filename() < b.filename();
  });
  if (frames.empty()) throw Failure("no .png or .ppm frames in '" + dir + "'");
  return frames;
}

struct TrackCmd {
  std::string frames_dir, preview_out, output, annotate_dir, summary;
  std::vector<int> window;
  std::vector<std::int32_t> select;
  bool update_bins = false;
  double center_tol = 0.5;
  int max_inner_iters = 30;
  ShiftFlags shift;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("track", "Track a window through numbered frames by color bins");
    cmd->add_option("--frames", frames_dir, "Directory of numbered PNG/PPM frames")->required();
    cmd->add_option("--window", window, "Initial window x,y,w,h (pixels)")->delimiter(',')->expected(4)->required();
    shift.add(cmd);
    cmd->add_option("--select", select, "Cluster ids of the object; omit to only print the preview")->delimiter(',');
    cmd->add_flag("--update-bins", update_bins, "Let the bin set drift into neighboring color cells");
    cmd->add_option("--center-tol", center_tol, "Window convergence tolerance (pixels)")->capture_default_str();
    cmd->add_option("--max-inner-iters", max_inner_iters, "Re-centering cap per frame")->capture_default_str();
    cmd->add_option("--preview", preview_out, "Write the cluster preview image of the initial window");
    cmd->add_option("--output", output, "Per-frame CSV path (default stdout)");
    cmd->add_option("--summary", summary, "Write a JSON summary of the run");
    cmd->add_option("--annotate", annotate_dir, "Write frames with the window drawn into this directory");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto frames = list_frames(frames_dir);
    gs_image* raw = nullptr;
    check(gs_image_read(frames[0].c_str(), &raw), "read " + frames[0].string());
    ImagePtr frame0(raw);
    const gs_shift_config cfg = shift.config();

    gs_preview* pv = nullptr;
    check(gs_preview_create(frame0.get(), window[0], window[1], window[2], window[3], &cfg, &pv), "preview");
    Preview preview(pv);
    if (!preview_out.empty()) {
      gs_image* pimg = nullptr;
      check(gs_preview_image(preview.get(), &pimg), "preview");
      ImagePtr owned(pimg);
      check(gs_image_write(owned.get(), preview_out.c_str()), "write");
    }
    if (select.empty()) {
      write_text(output, preview_json(preview.get()).dump(2) + "\n");
      return;
    }

    gs_track_config tc;
    gs_track_config_init(&tc);
    tc.h = cfg.h;
    tc.center_tol = center_tol;
    tc.max_inner_iters = max_inner_iters;
    gs_tracker* tr = nullptr;
    check(gs_tracker_create(frame0.get(), preview.get(), select.data(), select.size(), &tc, &tr), "init");
    Tracker tracker(tr);
    if (!annotate_dir.empty()) fs::create_directories(annotate_dir);

    std::ostringstream csv;
    csv << "frame_idx,cx,cy,lost,match_count\n";
    gs_track_info info;
    check(gs_tracker_info(tracker.get(), &info), "track");
    std::size_t lost_at = 0;
    bool lost = false;
    for (std::size_t f = 0; f < frames.size(); ++f) {
      ImagePtr frame;
      if (f == 0) {
        frame = std::move(frame0);
      } else {
        gs_image* img = nullptr;
        check(gs_image_read(frames[f].c_str(), &img), "read " + frames[f].string());
        frame.reset(img);
        if (!lost) {
          check(gs_tracker_step(tracker.get(), frame.get(), update_bins ? 1 : 0, &info), "track");
          if (info.lost) {
            lost = true;
            lost_at = f;
          }
        }
      }
      csv << f << ',' << fmt(info.cx) << ',' << fmt(info.cy) << ',' << (lost ? 1 : 0) << ','
          << (lost ? 0 : info.match_count) << '\n';
      if (!annotate_dir.empty()) {
        const bool ok = !lost;
        check(gs_image_draw_window(frame.get(), info.cx, info.cy, info.w, info.h, ok ? 0 : 255, ok ? 255 : 0, 0),
              "draw");
        const fs::path dst = fs::path(annotate_dir) / (frames[f].stem().string() + ".png");
        check(gs_image_write(frame.get(), dst.c_str()), "write");
      }
    }
    write_text(output, csv.str());
    if (!summary.empty()) {
      json doc{{"schema", 1},
               {"command", "track"},
               {"frames", frames.size()},
               {"h", cfg.h},
               {"select", select},
               {"update_bins", update_bins},
               {"lost", lost},
               {"lost_at", lost ? json(lost_at) : json(nullptr)},
               {"bin_count", info.bin_count}};
      write_text(summary, doc.dump(2) + "\n");
    }
  }

  static std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  }

  json preview_json(const gs_preview* pv) const {
    std::int32_t k = 0;
    check(gs_preview_num_clusters(pv, &k), "preview");
    std::vector<std::size_t> sizes(k);
    std::vector<double> means(static_cast<std::size_t>(k) * 3);
    check(gs_preview_cluster_sizes(pv, sizes.data(), sizes.size()), "preview");
    check(gs_preview_mean_colors(pv, means.data(), means.size()), "preview");
    json clusters = json::array();
    for (std::int32_t i = 0; i < k; ++i) {
      clusters.push_back(json{{"id", i},
                              {"size", sizes[i]},
                              {"mean_color", {means[i * 3], means[i * 3 + 1], means[i * 3 + 2]}}});
    }
    return json{{"schema", 1},      {"command", "track-preview"}, {"window", window},
                {"h", shift.h},     {"k", k},                     {"clusters", clusters}};
  }
};

// ---- bench ----------------------------------------------------------------

struct BenchCmd {
  MixtureFlags mix;
  std::vector<std::string> engines{"meanshiftpp", "meanshift"};
  std::vector<std::size_t> n_grid{1000, 2000, 4000, 8000};
  double h = 0.5, wall_cap = 0.0, eta = 0.0;
  int repeats = 3, max_iters = 300;
  std::size_t threads = 1;
  bool no_score = false;
  std::string csv_out;
  OutputFlags out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "Time engines across sample sizes and fit log-log slopes");
    cmd->add_option("--engines", engines, "Engines to time")->delimiter(',')->capture_default_str();
    cmd->add_option("--n-grid", n_grid, "Increasing sample sizes (>= 4)")->delimiter(',')->capture_default_str();
    mix.add(cmd);
    cmd->add_option("--h", h, "Bandwidth")->capture_default_str();
    cmd->add_option("--eta", eta, "Convergence threshold (default 1e-4*n*h)");
    cmd->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
    cmd->add_option("--repeats", repeats, "Timed runs per size; the median is kept")->capture_default_str();
    cmd->add_option("--wall-cap", wall_cap, "Seconds per run before the size is censored (0 = none)");
    cmd->add_option("--threads", threads, "Engine threads, 0 = auto")->capture_default_str();
    cmd->add_flag("--no-score", no_score, "Skip ARI/AMI against the mixture labels");
    cmd->add_option("--csv", csv_out, "Also write records as CSV");
    out.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    std::vector<gs_engine> es;
    for (const auto& e : engines) es.push_back(parse_engine(e));
    const gs_mixture_spec spec = mix.spec();
    gs_bench_options opts;
    gs_bench_options_init(&opts);
    opts.repeats = repeats;
    opts.wall_cap = wall_cap;
    opts.threads = threads;
    opts.eta = eta;
    opts.max_iters = max_iters;
    opts.score = no_score ? 0 : 1;

    gs_bench_report* r = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    check(gs_bench_scaling(es.data(), es.size(), n_grid.data(), n_grid.size(), &spec, h, &opts, &r), "bench");
    const double elapsed = seconds_since(t0);
    BenchReport report(r);

    std::size_t nrec = 0, nwarn = 0;
    check(gs_bench_report_size(report.get(), &nrec, &nwarn), "bench");
    json records = json::array();
    std::ostringstream csv;
    csv << "engine,n,d,h,iters,k,wall_time,ari,ami,censored\n";
    csv.precision(17);
    for (std::size_t i = 0; i < nrec; ++i) {
      gs_bench_record rec;
      check(gs_bench_report_record(report.get(), i, &rec), "bench");
      json j{{"engine", engine_name(rec.engine)}, {"n", rec.n}, {"d", rec.d}, {"h", rec.h},
             {"iters", rec.iterations}, {"k", rec.k}, {"wall_time", rec.wall_time},
             {"censored", rec.censored != 0}};
      j["ari"] = rec.has_scores ? json(rec.ari) : json(nullptr);
      j["ami"] = rec.has_scores ? json(rec.ami) : json(nullptr);
      records.push_back(j);
      csv << engine_name(rec.engine) << ',' << rec.n << ',' << rec.d << ',' << rec.h << ',' << rec.iterations << ','
          << rec.k << ',' << rec.wall_time << ',';
      if (rec.has_scores) csv << rec.ari << ',' << rec.ami;
      else csv << ',';
      csv << ',' << (rec.censored ? 1 : 0) << '\n';
    }
    json slopes = json::object();
    for (gs_engine e : es) {
      double s = 0;
      const gs_status st = gs_bench_report_slope(report.get(), e, &s);
      if (st == GS_OK) slopes[engine_name(e)] = s;
      else if (st == GS_ERR_NOT_FOUND) slopes[engine_name(e)] = nullptr;
      else check(st, "bench");
    }
    json warnings = json::array();
    for (std::size_t i = 0; i < nwarn; ++i) {
      const char* text = nullptr;
      check(gs_bench_report_warning(report.get(), i, &text), "bench");
      warnings.push_back(text);
    }
    if (!csv_out.empty()) write_text(csv_out, csv.str());
    // Timings are the payload here, so they stay in the main document.
    json doc{{"schema", 1}, {"command", "bench"}, {"h", h},        {"repeats", repeats}, {"threads", threads},
             {"mixture", mix.describe()},        {"records", records}, {"slopes", slopes}, {"warnings", warnings}};
    emit(std::move(doc), json{{"total_seconds", elapsed}}, out);
  }
};

// ---- sweep ----------------------------------------------------------------

struct SweepCmd {
  std::string input, engine = "meanshiftpp", csv_out;
  std::vector<double> h_grid;
  double h_min = 0.0, h_max = 0.0, h_step = 0.0, eta = 0.0;
  std::size_t threads = 1;
  OutputFlags out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Score clusterings over a bandwidth grid against reference labels");
    cmd->add_option("--input", input, "CSV whose last column holds reference labels")->required();
    cmd->add_option("--engine", engine, "meanshiftpp or meanshift")->capture_default_str();
    cmd->add_option("--h-grid", h_grid, "Explicit bandwidths")->delimiter(',');
    cmd->add_option("--h-min", h_min, "Grid start (with --h-max and --h-step)");
    cmd->add_option("--h-max", h_max, "Grid end, inclusive");
    cmd->add_option("--h-step", h_step, "Grid step");
    cmd->add_option("--eta", eta, "Convergence threshold (default 1e-4*n*h)");
    cmd->add_option("--threads", threads, "Engine threads, 0 = auto")->capture_default_str();
    cmd->add_option("--csv", csv_out, "Also write the table as CSV");
    out.add(cmd);
    cmd->callback([this] { run(); });
  }

  std::vector<double> grid() const {
    if (!h_grid.empty()) return h_grid;
    if (!(h_step > 0.0) || !(h_max >= h_min) || !(h_min > 0.0)) {
      throw Failure("give --h-grid, or --h-min > 0, --h-max >= --h-min and --h-step > 0");
    }
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
      const double v = h_min + static_cast<double>(i) * h_step;
      if (v > h_max + h_step * 1e-3) break;
      g.push_back(v);
    }
    return g;
  }

  void run() {
    const gs_engine e = parse_engine(engine);
    const std::vector<double> hs = grid();
    gs_points* p = nullptr;
    gs_labels* l = nullptr;
    check(gs_points_load_csv(input.c_str(), 1, &p, &l), "load");
    Points points(p);
    Labels labels(l);
    std::vector<gs_sweep_row> rows(hs.size());
    check(gs_sweep_bandwidth(points.get(), labels.get(), e, hs.data(), hs.size(), eta, threads, rows.data()),
          "sweep");

    json table = json::array(), times = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "h,ari,ami,k,iters,wall_time,best\n";
    json best;
    for (const auto& r : rows) {
      json j{{"h", r.h}, {"ari", r.ari}, {"ami", r.ami}, {"k", r.k}, {"iters", r.iterations}, {"best", r.best != 0}};
      if (r.best) best = j;
      table.push_back(j);
      times.push_back(r.wall_time);
      csv << r.h << ',' << r.ari << ',' << r.ami << ',' << r.k << ',' << r.iterations << ',' << r.wall_time << ','
          << (r.best ? 1 : 0) << '\n';
    }
    if (!csv_out.empty()) write_text(csv_out, csv.str());
    json doc{{"schema", 1}, {"command", "sweep"}, {"engine", engine_name(e)}, {"rows", table}, {"best", best}};
    emit(std::move(doc), json{{"wall_time_per_row", times}}, out);
  }
};

// ---- density-check --------------------------------------------------------

struct DensityCmd {
  std::string target = "triangular", csv_out;
  std::size_t dim = 1;
  double alpha = 1.0;
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::uint64_t seed = 0;
  OutputFlags out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("density-check", "Measure the grid density estimator's sup error as n grows");
    cmd->add_option("--target", target, "uniform, triangular or truncated-gaussian")->capture_default_str();
    cmd->add_option("--dim", dim, "Dimension")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Smoothness exponent in (0, 1]; h = n^(-1/(2 alpha + d))")
        ->capture_default_str();
    cmd->add_option("--sizes", sizes, "Increasing sample sizes (>= 3)")->delimiter(',')->capture_default_str();
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    cmd->add_option("--csv", csv_out, "Also write (n, h, sup_error) as CSV");
    out.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    std::vector<double> bandwidths(sizes.size()), errors(sizes.size());
    double slope = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    check(gs_rate_experiment(target.c_str(), dim, sizes.data(), sizes.size(), alpha, seed, bandwidths.data(),
                             errors.data(), &slope),
          "density-check");
    const double elapsed = seconds_since(t0);
    if (!csv_out.empty()) {
      std::ostringstream csv;
      csv.precision(17);
      csv << "n,h,sup_error\n";
      for (std::size_t i = 0; i < sizes.size(); ++i) csv << sizes[i] << ',' << bandwidths[i] << ',' << errors[i] << '\n';
      write_text(csv_out, csv.str());
    }
    json doc{{"schema", 1},           {"command", "density-check"}, {"target", target},
             {"dim", dim},            {"alpha", alpha},             {"seed", seed},
             {"sample_sizes", sizes}, {"bandwidths", bandwidths},   {"sup_errors", errors},
             {"fitted_exponent", slope}};
    emit(std::move(doc), json{{"total_seconds", elapsed}}, out);
  }
};

// ---- config files ---------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw Failure("config values must be scalars or arrays of scalars");
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Expands `--config FILE` into ordinary flags. Keys are long flag names
// without dashes; anything already on the command line is left alone.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw Failure("cannot open config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Failure("config '" + path + "' is not valid JSON (byte " + std::to_string(e.byte) + ")");
  }
  if (!cfg.is_object()) throw Failure("config '" + path + "' must be a JSON object");

  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config") throw Failure("config files cannot nest --config");
    if (given_on_command_line(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) joined += (joined.empty() ? "" : ",") + scalar_text(item);
      args.push_back(flag);
      args.push_back(joined);
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(scalar_text(value));
    }
  }
  return args;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridshift: grid-based mean shift clustering, segmentation and tracking"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", gs_version());

  GenerateCmd generate;
  ClusterCmd cluster;
  SegmentCmd segment;
  TrackCmd track;
  BenchCmd bench;
  SweepCmd sweep;
  DensityCmd density;
  generate.add(app);
  cluster.add(app);
  segment.add(app);
  track.add(app);
  bench.add(app);
  sweep.add(app);
  density.add(app);
  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--config", "JSON file supplying any flag; command-line flags win");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gridshift: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gridshift: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

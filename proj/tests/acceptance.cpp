// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridshift/bench.hpp"
#include "gridshift/datasets.hpp"
#include "gridshift/density.hpp"
#include "gridshift/image.hpp"
#include "gridshift/metrics.hpp"
#include "gridshift/modeseek.hpp"
#include "gridshift/segment.hpp"
#include "gridshift/stats.hpp"
#include "gridshift/track.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace gridshift;

namespace {

// ---- pinned tolerances and budgets ----

constexpr int kOracleInstances = 200;
constexpr std::size_t kOracleMaxN = 2000;
constexpr double kOracleRelTol = 1e-9;
constexpr double kOracleBudgetSec = 60.0;

constexpr double kPPSlopeLo = 0.8, kPPSlopeHi = 1.3;
constexpr double kMSSlopeLo = 1.7, kMSSlopeHi = 2.3;
constexpr double kMinSpeedup = 100.0;
constexpr double kScalingBudgetSec = 600.0;

constexpr double kIrisMinAri = 0.55;
constexpr double kIrisMinAmi = 0.65;
constexpr double kIrisRunBudgetSec = 1.0;

constexpr double kSegmentH = 16.0;
constexpr double kSegmentMinAri = 0.8;
constexpr int kSegmentMinImages = 3;
constexpr double kSegmentBudgetSec = 300.0;

constexpr double kRateSlopeLo = -0.5, kRateSlopeHi = -0.15;
constexpr int kRateMinDecreasing = 4;
constexpr double kRateBudgetSec = 120.0;

constexpr int kMetricInstances = 500;
constexpr std::size_t kMetricMaxN = 50;
constexpr double kMetricTol = 1e-9;

constexpr int kTrackFrames = 30;
constexpr int kTrackStep = 3;
constexpr double kTrackMaxCenterError = 0.5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ShiftConfig with_h(double h, std::size_t threads = 0) {
  ShiftConfig cfg;
  cfg.h = h;
  cfg.threads = threads;
  return cfg;
}

// 1. MeanShift++ step vs brute-force neighbor-cell means.
Outcome oracle_equivalence() {
  Timer timer;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> n_dist(1, kOracleMaxN);
  std::uniform_real_distribution<double> h_dist(0.05, 2.0);
  double worst = 0.0;
  int mismatched = 0;
  for (int t = 0; t < kOracleInstances; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 4);
    const std::size_t n = n_dist(rng);
    const double h = h_dist(rng);
    // Alternate spread-out and clumped instances so neighborhoods vary in occupancy.
    PointSet pts = oracle::uniform_points(n, d, -5.0, 5.0, rng);
    if (t % 2 == 1) {
      std::normal_distribution<double> noise(0.0, 0.5);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) pts(i, k) = (i % 3) * 2.0 + noise(rng);
      }
    }
    const StepResult got = meanshiftpp_step(pts, with_h(h));
    const PointSet want = oracle::shift_step(pts, h);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double scale = std::max(std::abs(want(i, k)), std::numeric_limits<double>::min());
        const double rel = std::abs(got.points(i, k) - want(i, k)) / scale;
        worst = std::max(worst, rel);
        ok = ok && rel <= kOracleRelTol;
      }
    }
    mismatched += ok ? 0 : 1;
  }
  const double secs = timer.seconds();
  return {mismatched == 0 && secs < kOracleBudgetSec,
          std::to_string(kOracleInstances - mismatched) + "/" + std::to_string(kOracleInstances) +
              " instances match, worst rel err " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s"};
}

GaussianMixtureSpec scaling_mixture(std::size_t d) {
  GaussianMixtureSpec spec;
  spec.k = 3;
  spec.d = d;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < d; ++k) spec.centers.push_back(k == j ? 4.0 : 0.0);
  }
  spec.weights = {0.3, 0.3, 0.4};
  spec.sigma = 0.5;
  spec.seed = 11;
  return spec;
}

// 2. Runtime scaling slopes and the speedup at n = 10^4, d = 3.
Outcome runtime_scaling() {
  Timer timer;
  const double h = 0.5;
  BenchOptions opts;
  opts.threads = 1;
  opts.score = false;
  const auto pp = bench_scaling({Engine::MeanShiftPP}, {1000, 3000, 10000, 30000, 100000}, scaling_mixture(2), h, opts);
  const auto ms = bench_scaling({Engine::MeanShift}, {250, 500, 1000, 2000}, scaling_mixture(2), h, opts);
  const double pp_slope = pp.slopes.count(Engine::MeanShiftPP) ? pp.slopes.at(Engine::MeanShiftPP) : NAN;
  const double ms_slope = ms.slopes.count(Engine::MeanShift) ? ms.slopes.at(Engine::MeanShift) : NAN;

  const LabeledPoints data = generate_mixture(scaling_mixture(3), 10000);
  const auto time_run = [&](Engine e) {
    Timer t;
    run_engine(e, data.points, with_h(h, 1));
    return t.seconds();
  };
  std::vector<double> pp_times;
  for (int r = 0; r < 3; ++r) pp_times.push_back(time_run(Engine::MeanShiftPP));
  const double pp_time = median(pp_times);
  const double ms_time = time_run(Engine::MeanShift);
  const double speedup = ms_time / pp_time;
  const double secs = timer.seconds();

  const bool pass = pp_slope >= kPPSlopeLo && pp_slope <= kPPSlopeHi && ms_slope >= kMSSlopeLo &&
                    ms_slope <= kMSSlopeHi && speedup >= kMinSpeedup && secs < kScalingBudgetSec;
  return {pass, "meanshiftpp slope " + fmt("%.3f", pp_slope) + ", meanshift slope " + fmt("%.3f", ms_slope) +
                    ", speedup at n=1e4 d=3 " + fmt("%.0f", speedup) + "x, " + fmt("%.1f", secs) + " s"};
}

// 3. Iris bandwidth sweep.
Outcome iris_sweep() {
  const CsvDataset iris = load_points_csv(std::string(GRIDSHIFT_DATA_DIR) + "/iris.csv", true);
  const auto rows = sweep_bandwidth(iris.points, *iris.labels, Engine::MeanShiftPP, linear_grid(0.1, 2.0, 0.1));
  double best_ari = -1.0, best_ami = -1.0, best_h = 0.0, slowest = 0.0;
  for (const auto& r : rows) {
    if (r.ari > best_ari) {
      best_ari = r.ari;
      best_h = r.h;
    }
    best_ami = std::max(best_ami, r.ami);
    slowest = std::max(slowest, r.wall_time);
  }
  return {best_ari >= kIrisMinAri && best_ami >= kIrisMinAmi && slowest < kIrisRunBudgetSec,
          "best ARI " + fmt("%.4f", best_ari) + " (h=" + fmt("%.1f", best_h) + "), best AMI " + fmt("%.4f", best_ami) +
              ", slowest run " + fmt("%.4f", slowest) + " s"};
}

// 4. Both engines on the two-blob synthetic.
Outcome engine_agreement() {
  GaussianMixtureSpec spec;
  spec.k = 2;
  spec.d = 2;
  spec.centers = {0.0, 0.0, 2.0, 0.0};
  spec.weights = {0.5, 0.5};
  spec.sigma = 0.05;
  spec.seed = 7;
  const LabeledPoints data = generate_mixture(spec, 200);
  const auto pp = meanshiftpp(data.points, with_h(0.3));
  const auto ms = meanshift_baseline(data.points, with_h(0.3));
  const double ari = adjusted_rand_index(pp.labeling.labels, ms.labeling.labels);
  return {ari == 1.0, "ARI " + fmt("%.6f", ari) + ", k " + std::to_string(pp.labeling.k) + " vs " +
                          std::to_string(ms.labeling.k)};
}

// 5. Segmentation agreement at matched bandwidth on every bundled image.
Outcome segmentation_agreement() {
  Timer timer;
  int agreeing = 0;
  std::string detail;
  for (const char* name : {"chelsea.ppm", "coffee.ppm", "astronaut.ppm", "rocket.ppm"}) {
    const Image img = read_image(std::string(GRIDSHIFT_DATA_DIR) + "/images/" + name);
    SegmentOptions pp_opts, ms_opts;
    ms_opts.engine = Engine::MeanShift;
    const auto pp = segment_image(img, with_h(kSegmentH), pp_opts);
    const auto ms = segment_image(img, with_h(kSegmentH), ms_opts);
    const double ari = adjusted_rand_index(pp.map.labels, ms.map.labels);
    agreeing += ari >= kSegmentMinAri ? 1 : 0;
    detail += std::string(name) + " " + fmt("%.3f", ari) + " (k " + std::to_string(pp.map.k) + "/" +
              std::to_string(ms.map.k) + "), ";
  }
  const double secs = timer.seconds();
  return {agreeing >= kSegmentMinImages && secs < kSegmentBudgetSec,
          std::to_string(agreeing) + "/4 images at ARI >= 0.8: " + detail + fmt("%.1f", secs) + " s"};
}

// 6. Sup-error decay of the grid density estimator on the triangular density.
Outcome density_rate() {
  Timer timer;
  const TargetDensity target = TargetDensity::parse("triangular", 1);
  int decreasing = 0;
  double slope_sum = 0.0;
  std::string slopes;
  const std::vector<std::uint64_t> seeds{1000, 2000, 3000, 4000, 5000};
  for (std::uint64_t seed : seeds) {
    const RateReport r = rate_experiment(target, {1000, 10000, 100000}, 1.0, seed);
    decreasing += r.sup_errors[0] > r.sup_errors[1] && r.sup_errors[1] > r.sup_errors[2] ? 1 : 0;
    slope_sum += r.fitted_exponent;
    slopes += fmt("%.3f ", r.fitted_exponent);
  }
  const double mean_slope = slope_sum / static_cast<double>(seeds.size());
  const double secs = timer.seconds();
  return {decreasing >= kRateMinDecreasing && mean_slope >= kRateSlopeLo && mean_slope <= kRateSlopeHi &&
              secs < kRateBudgetSec,
          std::to_string(decreasing) + "/5 seeds decreasing, mean exponent " + fmt("%.3f", mean_slope) +
              " (per seed " + slopes + "), " + fmt("%.1f", secs) + " s"};
}

// 7. ARI / AMI / FM against pair-enumeration and direct E[MI] oracles.
Outcome metrics_oracle() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> n_dist(2, kMetricMaxN);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < kMetricInstances; ++t) {
    const std::size_t n = n_dist(rng);
    const int max_k = static_cast<int>(std::min<std::size_t>(n, 8));
    std::uniform_int_distribution<int> k_dist(1, max_k);
    const auto a = oracle::random_labels(n, k_dist(rng), rng);
    const auto b = t % 10 == 0 ? a : oracle::random_labels(n, k_dist(rng), rng);
    const double errs[3] = {std::abs(adjusted_rand_index(a, b) - oracle::ari(a, b)),
                            std::abs(adjusted_mutual_information(a, b) - oracle::ami(a, b)),
                            std::abs(fowlkes_mallows(a, b) - oracle::fm(a, b))};
    bool ok = true;
    for (double e : errs) {
      ok = ok && e <= kMetricTol;
      worst = std::max(worst, std::isnan(e) ? INFINITY : e);
    }
    bad += ok ? 0 : 1;
  }
  return {bad == 0, std::to_string(kMetricInstances - bad) + "/" + std::to_string(kMetricInstances) +
                        " labelings match, worst abs err " + fmt("%.2e", worst)};
}

// 8. Moving square, object removal, and color drift with and without bin updates.
Outcome tracking() {
  TrackConfig cfg;
  cfg.shift = with_h(32);
  const auto seq = synthetic::moving_square(kTrackFrames, kTrackStep);
  const auto preview = preview_clusters(seq.frames[0], seq.window0, cfg.shift);
  TrackState state = init_tracker(seq.frames[0], preview, cfg.shift.h, {synthetic::brightest_cluster(preview)});
  double worst = 0.0;
  bool tracked = true;
  for (std::size_t f = 1; f < seq.frames.size(); ++f) {
    state = track_frame(state, seq.frames[f], cfg, false);
    tracked = tracked && !state.lost;
    worst = std::max(worst, std::hypot(state.window.cx - seq.true_cx[f], state.window.cy - seq.true_cy[f]));
  }
  const bool square_ok = tracked && worst <= kTrackMaxCenterError;

  const Image empty(seq.frames[0].width, seq.frames[0].height);
  const TrackState after = track_frame(state, empty, cfg, false);
  const bool removal_ok = after.lost && after.window == state.window;

  const auto drift = synthetic::drifting_object();
  const auto drift_preview = preview_clusters(drift.frames[0], drift.window0, cfg.shift);
  const int obj = synthetic::brightest_cluster(drift_preview);
  const auto run_drift = [&](bool update) {
    TrackState s = init_tracker(drift.frames[0], drift_preview, cfg.shift.h, {obj});
    for (std::size_t f = 1; f < drift.frames.size(); ++f) {
      s = track_frame(s, drift.frames[f], cfg, update);
      if (s.lost) return static_cast<int>(f);
    }
    return -1;
  };
  const int lost_with = run_drift(true), lost_without = run_drift(false);
  const bool drift_ok = lost_with < 0 && lost_without > 0;

  return {square_ok && removal_ok && drift_ok,
          "square worst center error " + fmt("%.3f", worst) + " px" + (tracked ? "" : " (lost)") +
              ", removal " + (removal_ok ? "lost+frozen" : "NOT detected") + ", drift with updates " +
              (lost_with < 0 ? "tracked" : "lost at " + std::to_string(lost_with)) + ", without " +
              (lost_without > 0 ? "lost at frame " + std::to_string(lost_without) : "never lost")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence}, {"runtime scaling", runtime_scaling},
      {"iris clustering", iris_sweep},            {"engine agreement", engine_agreement},
      {"segmentation agreement", segmentation_agreement}, {"density consistency", density_rate},
      {"metrics oracle", metrics_oracle},         {"tracking", tracking}};

  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

/*
 * gridshift C API.
 *
 * Every function returns a gs_status. On failure a one-line description is
 * available from gs_last_error() on the calling thread until the next failing
 * call. Objects are opaque handles created by the library and released with
 * the matching *_free function (passing NULL is allowed). Array accessors copy
 * into caller buffers and fail with GS_ERR_BUFFER_TOO_SMALL if `capacity` is
 * short; query the length first.
 */
#ifndef GRIDSHIFT_H
#define GRIDSHIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GS_API __declspec(dllexport)
#else
#define GS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_INVALID_ARGUMENT = 1,
  GS_ERR_INVALID_BANDWIDTH = 2,
  GS_ERR_INVALID_POINT = 3,
  GS_ERR_DIMENSION_MISMATCH = 4,
  GS_ERR_OUT_OF_RANGE = 5,
  GS_ERR_IO = 6,
  GS_ERR_PARSE = 7,
  GS_ERR_NULL_ARGUMENT = 8,
  GS_ERR_BUFFER_TOO_SMALL = 9,
  GS_ERR_NOT_FOUND = 10,
  GS_ERR_OUT_OF_MEMORY = 11,
  GS_ERR_INTERNAL = 12
} gs_status;

GS_API const char* gs_status_string(gs_status status);
GS_API const char* gs_last_error(void);
GS_API const char* gs_version(void);

/* ---- point sets and label vectors ------------------------------------- */

typedef struct gs_points gs_points;
typedef struct gs_labels gs_labels;

/* Copies n*d row-major values; rejects n == 0, d == 0 and non-finite entries. */
GS_API gs_status gs_points_create(const double* data, size_t n, size_t d, gs_points** out);
GS_API void gs_points_free(gs_points* points);
GS_API gs_status gs_points_shape(const gs_points* points, size_t* n, size_t* d);
GS_API gs_status gs_points_copy(const gs_points* points, double* out, size_t capacity);

/* `labels` may be NULL. When `last_column_is_label` is set and `labels` is
 * non-NULL it receives dense ids in order of first appearance. */
GS_API gs_status gs_points_load_csv(const char* path, int last_column_is_label, gs_points** points,
                                    gs_labels** labels);
/* `labels` may be NULL. */
GS_API gs_status gs_points_write_csv(const char* path, const gs_points* points, const gs_labels* labels);

GS_API gs_status gs_labels_create(const int32_t* values, size_t n, gs_labels** out);
GS_API void gs_labels_free(gs_labels* labels);
GS_API gs_status gs_labels_size(const gs_labels* labels, size_t* n);
GS_API gs_status gs_labels_copy(const gs_labels* labels, int32_t* out, size_t capacity);
/* Name of label id `id` as read from CSV; NOT_FOUND for generated labels. */
GS_API gs_status gs_labels_name(const gs_labels* labels, int32_t id, const char** name);

/* ---- synthetic data ---------------------------------------------------- */

typedef struct gs_mixture_spec {
  size_t k;
  size_t d;
  const double* centers; /* k*d */
  const double* weights; /* k, nonnegative, sum 1 */
  double sigma;
  uint64_t seed;
} gs_mixture_spec;

GS_API gs_status gs_generate_mixture(const gs_mixture_spec* spec, size_t n, gs_points** points,
                                     gs_labels** labels);

/* ---- mode seeking ------------------------------------------------------ */

typedef enum gs_engine { GS_ENGINE_MEANSHIFTPP = 0, GS_ENGINE_MEANSHIFT = 1 } gs_engine;
typedef enum gs_kernel { GS_KERNEL_FLAT = 0, GS_KERNEL_GAUSSIAN = 1 } gs_kernel;

typedef struct gs_shift_config {
  double h;
  double eta;        /* <= 0 selects 1e-4 * n * h */
  int max_iters;
  gs_kernel kernel;  /* baseline engine only */
  size_t threads;    /* 0 = auto */
  double time_limit; /* seconds, 0 = none */
} gs_shift_config;

GS_API void gs_shift_config_init(gs_shift_config* cfg);

typedef struct gs_result gs_result;

GS_API gs_status gs_cluster(gs_engine engine, const gs_points* points, const gs_shift_config* cfg,
                            gs_result** out);
/* Clusters an already-converged iterate; the result has zero iterations. */
GS_API gs_status gs_extract_clusters(const gs_points* converged, double h, gs_result** out);
GS_API gs_status gs_meanshiftpp_step(const gs_points* points, const gs_shift_config* cfg, gs_points** out,
                                     double* total_movement);
GS_API void gs_result_free(gs_result* result);

typedef struct gs_result_info {
  size_t n;
  size_t d;
  int32_t k;
  int32_t iterations;
  int converged;
  int timed_out;
} gs_result_info;

GS_API gs_status gs_result_info_get(const gs_result* result, gs_result_info* info);
GS_API gs_status gs_result_labels(const gs_result* result, int32_t* out, size_t capacity);
/* k*d row-major */
GS_API gs_status gs_result_modes(const gs_result* result, double* out, size_t capacity);
/* n*d row-major final iterate */
GS_API gs_status gs_result_converged(const gs_result* result, double* out, size_t capacity);
/* `iterations` entries */
GS_API gs_status gs_result_movement(const gs_result* result, double* out, size_t capacity);

/* ---- metrics ----------------------------------------------------------- */

GS_API gs_status gs_adjusted_rand_index(const int32_t* a, const int32_t* b, size_t n, double* out);
GS_API gs_status gs_adjusted_mutual_information(const int32_t* a, const int32_t* b, size_t n, double* out);
GS_API gs_status gs_fowlkes_mallows(const int32_t* a, const int32_t* b, size_t n, double* out);

/* ---- grid density estimate -------------------------------------------- */

typedef struct gs_density gs_density;

GS_API gs_status gs_density_fit(const gs_points* points, double h, gs_density** out);
GS_API void gs_density_free(gs_density* density);
GS_API gs_status gs_density_evaluate(const gs_density* density, const double* x, size_t d, double* out);

/* target: "uniform", "triangular" or "truncated-gaussian" on [0,1]^dim.
 * bandwidths and sup_errors receive `count` entries each. */
GS_API gs_status gs_rate_experiment(const char* target, size_t dim, const size_t* sample_sizes, size_t count,
                                    double alpha, uint64_t seed, double* bandwidths, double* sup_errors,
                                    double* fitted_exponent);

/* ---- images and segmentation ------------------------------------------ */

typedef struct gs_image gs_image;

/* rgb: width*height*3 bytes, row-major */
GS_API gs_status gs_image_create(const uint8_t* rgb, size_t width, size_t height, gs_image** out);
/* PNG or binary PPM, detected from the file signature */
GS_API gs_status gs_image_read(const char* path, gs_image** out);
/* ".ppm" suffix writes PPM, anything else PNG */
GS_API gs_status gs_image_write(const gs_image* image, const char* path);
GS_API void gs_image_free(gs_image* image);
GS_API gs_status gs_image_size(const gs_image* image, size_t* width, size_t* height);
GS_API gs_status gs_image_pixels(const gs_image* image, uint8_t* out, size_t capacity);
GS_API gs_status gs_image_downsample2(const gs_image* image, gs_image** out);
/* Outline of the window with center (cx, cy) and extent w x h. */
GS_API gs_status gs_image_draw_window(gs_image* image, double cx, double cy, int w, int h, uint8_t r, uint8_t g,
                                      uint8_t b);

typedef enum gs_feature_mode { GS_FEATURES_RGB = 0, GS_FEATURES_RGBXY = 1 } gs_feature_mode;

/* spatial_scale <= 0 selects 255 / max(width, height) */
GS_API gs_status gs_image_to_features(const gs_image* image, gs_feature_mode mode, double spatial_scale,
                                      gs_points** out);

typedef struct gs_segmentation gs_segmentation;

GS_API gs_status gs_segment_image(const gs_image* image, const gs_shift_config* cfg, gs_feature_mode mode,
                                  gs_engine engine, double spatial_scale, gs_segmentation** out);
GS_API void gs_segmentation_free(gs_segmentation* seg);
GS_API gs_status gs_segmentation_info(const gs_segmentation* seg, size_t* width, size_t* height, int32_t* k,
                                      int32_t* iterations);
GS_API gs_status gs_segmentation_labels(const gs_segmentation* seg, int32_t* out, size_t capacity);
/* k*3 */
GS_API gs_status gs_segmentation_mean_colors(const gs_segmentation* seg, double* out, size_t capacity);
GS_API gs_status gs_segmentation_recolor(const gs_image* image, const gs_segmentation* seg, gs_image** out);
/* Writes <prefix>.labels.pgm (16-bit) and <prefix>.json. */
GS_API gs_status gs_segmentation_write(const gs_segmentation* seg, const char* prefix, double h,
                                       gs_feature_mode mode);

/* ---- tracking ---------------------------------------------------------- */

typedef struct gs_preview gs_preview;
typedef struct gs_tracker gs_tracker;

/* Clusters the colors of window (x, y, w, h) of frame0 with MeanShift++. */
GS_API gs_status gs_preview_create(const gs_image* frame0, int x, int y, int w, int h, const gs_shift_config* cfg,
                                   gs_preview** out);
GS_API void gs_preview_free(gs_preview* preview);
GS_API gs_status gs_preview_num_clusters(const gs_preview* preview, int32_t* k);
GS_API gs_status gs_preview_cluster_sizes(const gs_preview* preview, size_t* out, size_t capacity);
/* k*3 mean colors of the window pixels per cluster */
GS_API gs_status gs_preview_mean_colors(const gs_preview* preview, double* out, size_t capacity);
GS_API gs_status gs_preview_image(const gs_preview* preview, gs_image** out);

typedef struct gs_track_config {
  double h;           /* color bandwidth, must match the preview */
  double center_tol;  /* pixels */
  int max_inner_iters;
} gs_track_config;

GS_API void gs_track_config_init(gs_track_config* cfg);

typedef struct gs_track_info {
  double cx;
  double cy;
  int w;
  int h;
  int lost;
  size_t match_count;
  int iterations;
  size_t bin_count;
} gs_track_info;

GS_API gs_status gs_tracker_create(const gs_image* frame0, const gs_preview* preview, const int32_t* selected,
                                   size_t selected_count, const gs_track_config* cfg, gs_tracker** out);
GS_API void gs_tracker_free(gs_tracker* tracker);
/* Fails with INVALID_ARGUMENT once the tracker is lost. */
GS_API gs_status gs_tracker_step(gs_tracker* tracker, const gs_image* frame, int update_bins, gs_track_info* info);
GS_API gs_status gs_tracker_info(const gs_tracker* tracker, gs_track_info* info);
/* bin_count * 3 lattice coordinates, sorted */
GS_API gs_status gs_tracker_bins(const gs_tracker* tracker, int64_t* out, size_t capacity);

/* ---- benchmarking ------------------------------------------------------ */

typedef struct gs_bench_options {
  int repeats;
  double wall_cap; /* seconds per run, 0 = none */
  size_t threads;
  double eta;      /* <= 0: default */
  int max_iters;
  int score;
} gs_bench_options;

GS_API void gs_bench_options_init(gs_bench_options* opts);

typedef struct gs_bench_record {
  gs_engine engine;
  size_t n;
  size_t d;
  double h;
  int32_t iterations;
  int32_t k;
  double wall_time;
  int has_scores;
  double ari;
  double ami;
  int censored;
} gs_bench_record;

typedef struct gs_bench_report gs_bench_report;

GS_API gs_status gs_bench_scaling(const gs_engine* engines, size_t engine_count, const size_t* n_grid,
                                  size_t n_count, const gs_mixture_spec* spec, double h,
                                  const gs_bench_options* opts, gs_bench_report** out);
GS_API void gs_bench_report_free(gs_bench_report* report);
GS_API gs_status gs_bench_report_size(const gs_bench_report* report, size_t* records, size_t* warnings);
GS_API gs_status gs_bench_report_record(const gs_bench_report* report, size_t index, gs_bench_record* out);
/* NOT_FOUND when the engine had too few uncensored sizes for a fit. */
GS_API gs_status gs_bench_report_slope(const gs_bench_report* report, gs_engine engine, double* slope);
GS_API gs_status gs_bench_report_warning(const gs_bench_report* report, size_t index, const char** text);

typedef struct gs_sweep_row {
  double h;
  double ari;
  double ami;
  int32_t k;
  int32_t iterations;
  double wall_time;
  int best;
} gs_sweep_row;

/* rows receives h_count entries. eta <= 0 selects the default. */
GS_API gs_status gs_sweep_bandwidth(const gs_points* points, const gs_labels* labels, gs_engine engine,
                                    const double* h_grid, size_t h_count, double eta, size_t threads,
                                    gs_sweep_row* rows);

#ifdef __cplusplus
}
#endif

#endif /* GRIDSHIFT_H */

#pragma once

// Window tracking on color-lattice bins: cluster the pixels of an initial
// window, keep the lattice cells B of the chosen clusters, then per frame
// re-center the window on the mean position of pixels whose color falls in B.

#include <set>
#include <vector>

#include "gridshift/grid.hpp"
#include "gridshift/image.hpp"
#include "gridshift/modeseek.hpp"

namespace gridshift {

// Covers pixel columns [ceil(cx - w/2), ceil(cx - w/2) + w) and likewise rows.
struct Window {
  double cx = 0.0, cy = 0.0;
  int w = 1, h_px = 1;

  // Top-left corner plus extent.
  static Window from_rect(int x, int y, int w, int h);
  int left() const;
  int top() const;
  friend bool operator==(const Window&, const Window&) = default;
};

// Shifts the center so the window lies inside the frame (or is centered on it
// when larger than the frame).
Window clamp_to_frame(Window win, std::size_t frame_w, std::size_t frame_h);

struct BinSet {
  std::set<GridIndex> bins;  // d = 3 color cells
  double h = 1.0;

  bool contains(const GridIndex& g) const { return bins.count(g) != 0; }
};

struct TrackState {
  Window window;
  BinSet bins;
  bool lost = false;
  std::size_t last_match_count = 0;
  int last_iterations = 0;
};

struct TrackConfig {
  ShiftConfig shift;        // h is the color bandwidth
  double center_tol = 0.5;  // pixels, Euclidean
  int max_inner_iters = 30;
};

// Clustering of the initial window's pixels, shown to the user so they can
// pick cluster ids. Rows of `labeling` follow window pixels in row-major order.
struct ClusterPreview {
  Window window;
  Labeling labeling;
  std::vector<std::size_t> sizes;  // pixels per cluster
  std::vector<double> mean_colors; // k x 3, original window colors
  Image label_image;               // window-sized, pixels painted with cluster mean colors
};

ClusterPreview preview_clusters(const Image& frame0, const Window& window0, const ShiftConfig& cfg);

TrackState init_tracker(const Image& frame0, const Window& window0, const ShiftConfig& cfg,
                        const std::vector<int>& selected_clusters);

// Same as above from an existing preview, avoiding a second clustering run.
TrackState init_tracker(const Image& frame0, const ClusterPreview& preview, double h,
                        const std::vector<int>& selected_clusters);

// Pixels of `frame` inside `win` whose color cell is in `bins`, as (x, y).
std::vector<std::pair<int, int>> matching_pixels(const Image& frame, const Window& win, const BinSet& bins);

// Tracks one frame. If no pixel matches at any inner iterate the state is
// flagged lost and the window stays where the previous frame left it. With
// `update_bins`, B becomes the window's color cells intersected with B and its
// Chebyshev neighbors; an empty intersection leaves B unchanged.
TrackState track_frame(const TrackState& state, const Image& frame, const TrackConfig& cfg, bool update_bins);

// Outline of `win` drawn in `color`, clipped to the frame.
void draw_window(Image& img, const Window& win, Rgb color);

}  // namespace gridshift

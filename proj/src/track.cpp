#include "gridshift/track.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gridshift/error.hpp"

namespace gridshift {

Window Window::from_rect(int x, int y, int w, int h) {
  if (w <= 0 || h <= 0) throw Error(ErrorCode::InvalidArgument, "window extent must be positive");
  return Window{x + w / 2.0, y + h / 2.0, w, h};
}

int Window::left() const { return static_cast<int>(std::ceil(cx - w / 2.0)); }
int Window::top() const { return static_cast<int>(std::ceil(cy - h_px / 2.0)); }

Window clamp_to_frame(Window win, std::size_t frame_w, std::size_t frame_h) {
  const auto clamp_axis = [](double c, int extent, std::size_t size) {
    const double half = extent / 2.0;
    const double lim = static_cast<double>(size);
    if (extent >= static_cast<int>(size)) return lim / 2.0;
    return std::clamp(c, half, lim - half);
  };
  win.cx = clamp_axis(win.cx, win.w, frame_w);
  win.cy = clamp_axis(win.cy, win.h_px, frame_h);
  return win;
}

namespace {

void check_window_inside(const Image& frame, const Window& win) {
  const int x = win.left(), y = win.top();
  if (x < 0 || y < 0 || x + win.w > static_cast<int>(frame.width) || y + win.h_px > static_cast<int>(frame.height)) {
    throw Error(ErrorCode::OutOfRange, "window lies outside the frame");
  }
}

template <class Fn>
void for_each_window_pixel(const Image& frame, const Window& win, Fn&& fn) {
  const int x0 = std::max(0, win.left()), y0 = std::max(0, win.top());
  const int x1 = std::min(static_cast<int>(frame.width), win.left() + win.w);
  const int y1 = std::min(static_cast<int>(frame.height), win.top() + win.h_px);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) fn(x, y, frame.at(x, y));
  }
}

void color_cell(const Rgb& c, double h, GridIndex& out) {
  const std::array<double, 3> v{static_cast<double>(c.r), static_cast<double>(c.g), static_cast<double>(c.b)};
  bin_into(v, h, out);
}

bool in_neighborhood(const BinSet& bins, const GridIndex& g) {
  GridIndex probe = g;
  for (std::int64_t dr = -1; dr <= 1; ++dr) {
    for (std::int64_t dg = -1; dg <= 1; ++dg) {
      for (std::int64_t db = -1; db <= 1; ++db) {
        probe.coords = {g.coords[0] + dr, g.coords[1] + dg, g.coords[2] + db};
        if (bins.contains(probe)) return true;
      }
    }
  }
  return false;
}

}  // namespace

ClusterPreview preview_clusters(const Image& frame0, const Window& window0, const ShiftConfig& cfg) {
  frame0.validate();
  check_window_inside(frame0, window0);
  PointSet colors(static_cast<std::size_t>(window0.w) * window0.h_px, 3);
  std::size_t i = 0;
  for_each_window_pixel(frame0, window0, [&](int, int, const Rgb& c) {
    auto row = colors.row(i++);
    row[0] = c.r;
    row[1] = c.g;
    row[2] = c.b;
  });
  ClusterPreview preview;
  preview.window = window0;
  preview.labeling = meanshiftpp(colors, cfg).labeling;
  preview.sizes.assign(preview.labeling.k, 0);
  for (int l : preview.labeling.labels) ++preview.sizes[l];

  preview.mean_colors.assign(static_cast<std::size_t>(preview.labeling.k) * 3, 0.0);
  for (std::size_t p = 0; p < colors.size(); ++p) {
    for (int ch = 0; ch < 3; ++ch) preview.mean_colors[preview.labeling.labels[p] * 3 + ch] += colors(p, ch);
  }
  for (int l = 0; l < preview.labeling.k; ++l) {
    for (int ch = 0; ch < 3; ++ch) preview.mean_colors[l * 3 + ch] /= static_cast<double>(preview.sizes[l]);
  }
  preview.label_image = Image(window0.w, window0.h_px);
  for (std::size_t p = 0; p < colors.size(); ++p) {
    const double* m = preview.mean_colors.data() + preview.labeling.labels[p] * 3;
    const auto ch = [&](int c) { return static_cast<std::uint8_t>(std::floor(m[c] + 0.5)); };
    preview.label_image.pixels[p] = Rgb{ch(0), ch(1), ch(2)};
  }
  return preview;
}

TrackState init_tracker(const Image& frame0, const ClusterPreview& preview, double h,
                        const std::vector<int>& selected_clusters) {
  check_bandwidth(h);
  if (selected_clusters.empty()) throw Error(ErrorCode::InvalidArgument, "no clusters selected for tracking");
  std::vector<bool> chosen(preview.labeling.k, false);
  for (int id : selected_clusters) {
    if (id < 0 || id >= preview.labeling.k) {
      throw Error(ErrorCode::OutOfRange, "cluster id " + std::to_string(id) + " not in [0, " +
                                             std::to_string(preview.labeling.k) + ")");
    }
    chosen[id] = true;
  }
  TrackState state;
  state.window = preview.window;
  state.bins.h = h;
  std::size_t i = 0;
  GridIndex g;
  for_each_window_pixel(frame0, preview.window, [&](int, int, const Rgb& c) {
    if (chosen[preview.labeling.labels[i++]]) {
      color_cell(c, h, g);
      state.bins.bins.insert(g);
      ++state.last_match_count;
    }
  });
  return state;
}

TrackState init_tracker(const Image& frame0, const Window& window0, const ShiftConfig& cfg,
                        const std::vector<int>& selected_clusters) {
  return init_tracker(frame0, preview_clusters(frame0, window0, cfg), cfg.h, selected_clusters);
}

std::vector<std::pair<int, int>> matching_pixels(const Image& frame, const Window& win, const BinSet& bins) {
  std::vector<std::pair<int, int>> out;
  GridIndex g;
  for_each_window_pixel(frame, win, [&](int x, int y, const Rgb& c) {
    color_cell(c, bins.h, g);
    if (bins.contains(g)) out.emplace_back(x, y);
  });
  return out;
}

TrackState track_frame(const TrackState& state, const Image& frame, const TrackConfig& cfg, bool update_bins) {
  frame.validate();
  if (state.lost) throw Error(ErrorCode::InvalidArgument, "tracker is lost; reinitialize before tracking");
  if (state.bins.bins.empty()) throw Error(ErrorCode::InvalidArgument, "tracker has an empty bin set");
  if (cfg.max_inner_iters < 1 || !(cfg.center_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tracking tolerance and iteration cap must be positive");
  }

  TrackState next = state;
  next.window = clamp_to_frame(state.window, frame.width, frame.height);
  next.last_iterations = 0;
  while (next.last_iterations < cfg.max_inner_iters) {
    const auto matches = matching_pixels(frame, next.window, next.bins);
    ++next.last_iterations;
    next.last_match_count = matches.size();
    if (matches.empty()) {
      next.window = state.window;
      next.lost = true;
      return next;
    }
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : matches) {
      sx += x;
      sy += y;
    }
    Window moved = next.window;
    // pixel (x, y) covers [x, x+1); its center is x + 0.5
    moved.cx = sx / static_cast<double>(matches.size()) + 0.5;
    moved.cy = sy / static_cast<double>(matches.size()) + 0.5;
    moved = clamp_to_frame(moved, frame.width, frame.height);
    const double shift = std::hypot(moved.cx - next.window.cx, moved.cy - next.window.cy);
    next.window = moved;
    if (shift < cfg.center_tol) break;
  }

  if (update_bins) {
    BinSet updated{{}, next.bins.h};
    GridIndex g;
    for_each_window_pixel(frame, next.window, [&](int, int, const Rgb& c) {
      color_cell(c, next.bins.h, g);
      if (in_neighborhood(next.bins, g)) updated.bins.insert(g);
    });
    if (!updated.bins.empty()) next.bins = std::move(updated);
  }
  return next;
}

void draw_window(Image& img, const Window& win, Rgb color) {
  const int x0 = win.left(), y0 = win.top(), x1 = x0 + win.w - 1, y1 = y0 + win.h_px - 1;
  const auto put = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < static_cast<int>(img.width) && y < static_cast<int>(img.height)) img.at(x, y) = color;
  };
  for (int x = x0; x <= x1; ++x) {
    put(x, y0);
    put(x, y1);
  }
  for (int y = y0; y <= y1; ++y) {
    put(x0, y);
    put(x1, y);
  }
}

}  // namespace gridshift

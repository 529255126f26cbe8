#include "lesionseg/artifacts.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace lesionseg {

namespace {

std::vector<double> luma_plane(const RasterImage& rgb) {
  rgb.require(Colorspace::RGB, "artifact detector");
  std::vector<double> out(rgb.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = luma(rgb.planes[0][i], rgb.planes[1][i], rgb.planes[2][i]);
  return out;
}

}  // namespace

std::size_t FieldMask::valid_count() const {
  std::size_t n = 0;
  for (FieldReason r : reason) n += r == FieldReason::None;
  return n;
}

FieldMask merge(const FieldMask& a, const FieldMask& b) {
  FieldMask out = a;
  for (std::size_t i = 0; i < out.reason.size(); ++i)
    if (out.reason[i] == FieldReason::None) out.reason[i] = b.reason[i];
  out.update_degenerate();
  return out;
}

FieldMask detect_lateral_bands(const RasterImage& rgb, double dark_thresh,
                               int min_cols) {
  const std::vector<double> lum = luma_plane(rgb);
  const int w = rgb.width, h = rgb.height;
  FieldMask out(w, h);

  std::vector<double> col_mean(w, 0.0), row_mean(h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = lum[static_cast<std::size_t>(y) * w + x];
      col_mean[x] += v;
      row_mean[y] += v;
    }
  for (int x = 0; x < w; ++x) col_mean[x] /= h;
  for (int y = 0; y < h; ++y) row_mean[y] /= w;

  auto mark_run = [&](int run_len, bool vertical, bool from_start, int extent) {
    if (run_len < min_cols) return;
    for (int k = 0; k < run_len; ++k) {
      const int idx = from_start ? k : extent - 1 - k;
      if (vertical) {
        for (int y = 0; y < h; ++y)
          out.invalidate(idx, y, FieldReason::LateralBand);
      } else {
        for (int x = 0; x < w; ++x)
          out.invalidate(x, idx, FieldReason::LateralBand);
      }
    }
  };

  auto run_from = [&](const std::vector<double>& means, bool from_start) {
    const int n = static_cast<int>(means.size());
    int len = 0;
    while (len < n) {
      const int idx = from_start ? len : n - 1 - len;
      if (means[idx] >= dark_thresh) break;
      ++len;
    }
    return len;
  };

  mark_run(run_from(col_mean, true), true, true, w);
  mark_run(run_from(col_mean, false), true, false, w);
  mark_run(run_from(row_mean, true), false, true, h);
  mark_run(run_from(row_mean, false), false, false, h);

  out.update_degenerate();
  return out;
}

FieldMask detect_black_frame(const RasterImage& rgb, double dark_thresh) {
  const std::vector<double> lum = luma_plane(rgb);
  const int w = rgb.width, h = rgb.height;
  FieldMask out(w, h);

  std::vector<std::uint8_t> visited(lum.size(), 0);
  std::vector<std::pair<int, int>> stack;
  auto push = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (visited[i] || lum[i] >= dark_thresh) return;
    visited[i] = 1;
    stack.emplace_back(x, y);
  };
  push(0, 0);
  push(w - 1, 0);
  push(0, h - 1);
  push(w - 1, h - 1);
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    out.invalidate(x, y, FieldReason::BlackFrame);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        push(nx, ny);
      }
  }
  out.update_degenerate();
  return out;
}

namespace {

// Outer-contour length of an 8-connected component, Moore tracing with
// diagonal steps weighted sqrt(2). Used only for the circularity gate.
double contour_length(const std::vector<int>& labels, int w, int h,
                      int label, int start_x, int start_y) {
  static const int dx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static const int dy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h &&
           labels[static_cast<std::size_t>(y) * w + x] == label;
  };
  // start pixel is the row-major first pixel, so its left/up neighbors are
  // outside the component
  int cx = start_x, cy = start_y;
  int dir = 6;  // come in from above
  auto step = [&]() -> int {
    for (int k = 0; k < 8; ++k) {
      const int nd = (dir + 6 + k) % 8;  // backtrack then clockwise
      const int nx = cx + dx8[nd], ny = cy + dy8[nd];
      if (inside(nx, ny)) {
        cx = nx;
        cy = ny;
        dir = nd;
        return nd;
      }
    }
    return -1;
  };
  if (step() < 0) return 4.0;  // isolated pixel
  // (pixel, direction) states are deterministic, so the loop is closed the
  // first time the post-start state recurs
  const int ax = cx, ay = cy, adir = dir;
  double len = 0.0;
  for (int guard = 0; guard < 8 * w * h; ++guard) {
    const int nd = step();
    if (nd < 0) break;
    len += (nd % 2 == 0) ? 1.0 : std::numbers::sqrt2;
    if (cx == ax && cy == ay && dir == adir) break;
  }
  return len > 0.0 ? len : 4.0;
}

}  // namespace

FieldMask detect_reference_circles(const RasterImage& rgb,
                                   const FieldMask& field,
                                   const ArtifactParams& p) {
  const std::vector<double> lum = luma_plane(rgb);
  const int w = rgb.width, h = rgb.height;
  FieldMask out = field;

  // dark pixels still inside the valid field
  std::vector<int> labels(lum.size(), -1);
  auto is_dark = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    return field.valid(x, y) && lum[i] < p.dark_thresh;
  };

  const double img_area = static_cast<double>(w) * h;
  const double min_area = p.circle_min_area_frac * img_area;
  const double max_area = p.circle_max_area_frac * img_area;

  int next_label = 0;
  std::vector<std::pair<int, int>> stack;
  std::vector<std::pair<int, int>> pixels;
  for (int y0 = 0; y0 < h; ++y0)
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
      if (labels[i0] >= 0 || !is_dark(x0, y0)) continue;
      const int label = next_label++;
      labels[i0] = label;
      stack.assign(1, {x0, y0});
      pixels.clear();
      double sum_x = 0.0, sum_y = 0.0;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        pixels.emplace_back(x, y);
        sum_x += x;
        sum_y += y;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (labels[ni] >= 0 || !is_dark(nx, ny)) continue;
            labels[ni] = label;
            stack.emplace_back(nx, ny);
          }
      }
      const double area = static_cast<double>(pixels.size());
      if (area < min_area || area > max_area) continue;
      const double cx = sum_x / area, cy = sum_y / area;
      const double ring = p.circle_border_ring;
      const bool in_ring = cx < ring * w || cx >= (1.0 - ring) * w ||
                           cy < ring * h || cy >= (1.0 - ring) * h;
      if (!in_ring) continue;
      const double per = contour_length(labels, w, h, label, x0, y0);
      const double circularity = 4.0 * std::numbers::pi * area / (per * per);
      if (circularity < p.circle_min_circularity) continue;
      for (auto [x, y] : pixels)
        out.invalidate(x, y, FieldReason::ReferenceCircle);
    }

  out.update_degenerate();
  return out;
}

RasterImage neutralize(const RasterImage& rgb, const FieldMask& field) {
  if (rgb.width != field.width || rgb.height != field.height)
    throw std::invalid_argument("neutralize: field dimensions differ");
  const std::size_t n = rgb.pixel_count();
  std::size_t valid = 0;
  std::vector<double> mean(rgb.plane_cnt(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (field.reason[i] != FieldReason::None) continue;
    ++valid;
    for (int p = 0; p < rgb.plane_cnt(); ++p) mean[p] += rgb.planes[p][i];
  }
  if (valid == 0) return rgb;  // degenerate field, leave untouched
  for (auto& m : mean) m /= static_cast<double>(valid);

  RasterImage out = rgb;
  for (std::size_t i = 0; i < n; ++i) {
    if (field.reason[i] == FieldReason::None) continue;
    for (int p = 0; p < rgb.plane_cnt(); ++p)
      out.planes[p][i] = clamp01(mean[p]);
  }
  return out;
}

}  // namespace lesionseg

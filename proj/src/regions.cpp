#include "lesionseg/regions.hpp"

#include <algorithm>
#include <cmath>

namespace lesionseg {

double convex_hull_area(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  auto cross = [](const std::pair<double, double>& o,
                  const std::pair<double, double>& a,
                  const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  double area2 = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += a.first * b.second - b.first * a.second;
  }
  return std::abs(area2) / 2.0;
}

std::vector<RegionCandidate> connected_components(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  std::vector<int> labels(mask.bits.size(), -1);
  std::vector<RegionCandidate> out;
  std::vector<std::uint32_t> stack;

  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::uint32_t i0 = static_cast<std::uint32_t>(y0) * w + x0;
      if (!mask.bits[i0] || labels[i0] >= 0) continue;
      RegionCandidate c;
      c.label = static_cast<int>(out.size());
      labels[i0] = c.label;
      stack.assign(1, i0);
      int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
      double sum_x = 0.0, sum_y = 0.0;
      while (!stack.empty()) {
        const std::uint32_t i = stack.back();
        stack.pop_back();
        c.pixels.push_back(i);
        const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
        sum_x += x;
        sum_y += y;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::uint32_t ni = static_cast<std::uint32_t>(ny) * w + nx;
            if (!mask.bits[ni] || labels[ni] >= 0) continue;
            labels[ni] = c.label;
            stack.push_back(ni);
          }
      }
      c.area = static_cast<std::int64_t>(c.pixels.size());
      c.min_x = min_x;
      c.min_y = min_y;
      c.bbox_w = max_x - min_x + 1;
      c.bbox_h = max_y - min_y + 1;
      c.cx = sum_x / static_cast<double>(c.area);
      c.cy = sum_y / static_cast<double>(c.area);

      // moments, perimeter, hull in a second pass over the pixel list
      double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
      std::int64_t edges = 0;
      std::vector<std::pair<double, double>> corners;
      auto fg = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < w && y < h &&
               labels[static_cast<std::size_t>(y) * w + x] == c.label;
      };
      for (std::uint32_t i : c.pixels) {
        const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
        const double dx = x - c.cx, dy = y - c.cy;
        mu20 += dx * dx;
        mu02 += dy * dy;
        mu11 += dx * dy;
        bool boundary = false;
        for (auto [nx, ny] :
             {std::pair{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}})
          if (!fg(nx, ny)) {
            ++edges;
            boundary = true;
          }
        if (boundary || c.area < 16) {
          corners.emplace_back(x, y);
          corners.emplace_back(x + 1.0, y);
          corners.emplace_back(x, y + 1.0);
          corners.emplace_back(x + 1.0, y + 1.0);
        }
      }
      c.mu20 = mu20;
      c.mu02 = mu02;
      c.mu11 = mu11;
      c.perimeter = static_cast<double>(edges);
      c.hull_area = std::max(convex_hull_area(std::move(corners)),
                             static_cast<double>(c.area));
      // labels order guarantees deterministic candidate order; sort pixel
      // lists so downstream consumers see row-major order
      std::sort(c.pixels.begin(), c.pixels.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<RegionCandidate> filter_candidates(
    const std::vector<RegionCandidate>& cands, double img_area,
    double min_area_frac, double min_extent, double min_solidity) {
  std::vector<RegionCandidate> out;
  const double min_area = min_area_frac * img_area;
  for (const auto& c : cands) {
    if (static_cast<double>(c.area) < min_area) continue;
    if (c.extent() < min_extent) continue;
    if (c.solidity() < min_solidity) continue;
    out.push_back(c);
  }
  return out;
}

std::optional<RegionCandidate> select_center(
    const std::vector<RegionCandidate>& cands, int img_w, int img_h) {
  if (cands.empty()) return std::nullopt;
  const double ccx = (img_w - 1) / 2.0, ccy = (img_h - 1) / 2.0;
  const RegionCandidate* best = nullptr;
  double best_d2 = 0.0;
  for (const auto& c : cands) {
    const double d2 =
        (c.cx - ccx) * (c.cx - ccx) + (c.cy - ccy) * (c.cy - ccy);
    if (!best || d2 < best_d2 ||
        (d2 == best_d2 &&
         (c.area > best->area ||
          (c.area == best->area && c.label < best->label)))) {
      best = &c;
      best_d2 = d2;
    }
  }
  return *best;
}

BinaryMask mask_from_candidate(const RegionCandidate& c, int width,
                               int height) {
  BinaryMask out(width, height);
  for (std::uint32_t i : c.pixels) out.bits[i] = 1;
  return out;
}

}  // namespace lesionseg

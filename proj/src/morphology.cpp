#include "lesionseg/morphology.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace lesionseg {

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  if (radius < 1)
    throw std::invalid_argument("morphology: radius must be >= 1");
  std::vector<std::pair<int, int>> out;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) out.emplace_back(dx, dy);
  return out;
}

template <bool Erode>
BinaryMask apply(const BinaryMask& mask, int radius) {
  const auto offsets = disk_offsets(radius);
  const int w = mask.width, h = mask.height;
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool hit = Erode;
      for (auto [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const bool v = mask.at(nx, ny);
        if (Erode ? !v : v) {
          hit = !Erode;
          break;
        }
      }
      out.set(x, y, hit);
    }
  return out;
}

}  // namespace

BinaryMask erode_disk(const BinaryMask& mask, int radius) {
  return apply<true>(mask, radius);
}

BinaryMask dilate_disk(const BinaryMask& mask, int radius) {
  return apply<false>(mask, radius);
}

BinaryMask open_disk(const BinaryMask& mask, int radius) {
  return dilate_disk(erode_disk(mask, radius), radius);
}

BinaryMask close_disk(const BinaryMask& mask, int radius) {
  return erode_disk(dilate_disk(mask, radius), radius);
}

BinaryMask open_close(const BinaryMask& mask, int radius) {
  return close_disk(open_disk(mask, radius), radius);
}

}  // namespace lesionseg

#include "lesionseg/mask.hpp"

#include <algorithm>
#include <stdexcept>

namespace lesionseg {

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += b;
  return n;
}

double jaccard(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("jaccard: mask dimensions differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool pa = a.bits[i] != 0, pb = b.bits[i] != 0;
    inter += pa && pb;
    uni += pa || pb;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask resize_mask_nearest(const BinaryMask& mask, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1)
    throw std::invalid_argument("resize_mask_nearest: zero-dimension request");
  BinaryMask out(out_w, out_h);
  const double sx = static_cast<double>(mask.width) / out_w;
  const double sy = static_cast<double>(mask.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    int src_y = static_cast<int>((y + 0.5) * sy);
    src_y = std::clamp(src_y, 0, mask.height - 1);
    for (int x = 0; x < out_w; ++x) {
      int src_x = static_cast<int>((x + 0.5) * sx);
      src_x = std::clamp(src_x, 0, mask.width - 1);
      out.set(x, y, mask.at(src_x, src_y));
    }
  }
  return out;
}

}  // namespace lesionseg

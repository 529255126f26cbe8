#pragma once

#include <cstdint>
#include <vector>

namespace lesionseg {

// Binary lesion mask, true = lesion.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h),
        bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;

  bool operator==(const BinaryMask&) const = default;
};

// |a n b| / |a u b|; 1.0 when both masks are empty.
double jaccard(const BinaryMask& a, const BinaryMask& b);

BinaryMask resize_mask_nearest(const BinaryMask& mask, int out_w, int out_h);

}  // namespace lesionseg

#pragma once

#include <cstdint>
#include <vector>

#include "lesionseg/image.hpp"

namespace lesionseg {

enum class FieldReason : std::uint8_t {
  None,
  LateralBand,
  BlackFrame,
  ReferenceCircle
};

// Per-pixel validity map; invalid pixels carry the reason they were excluded.
struct FieldMask {
  int width = 0;
  int height = 0;
  std::vector<FieldReason> reason;
  bool degenerate = false;  // set when no valid pixel remains

  FieldMask() = default;
  FieldMask(int w, int h)
      : width(w), height(h),
        reason(static_cast<std::size_t>(w) * h, FieldReason::None) {}

  bool valid(int x, int y) const {
    return reason[static_cast<std::size_t>(y) * width + x] ==
           FieldReason::None;
  }
  void invalidate(int x, int y, FieldReason r) {
    auto& cell = reason[static_cast<std::size_t>(y) * width + x];
    if (cell == FieldReason::None) cell = r;
  }
  std::size_t valid_count() const;
  void update_degenerate() { degenerate = valid_count() == 0; }
};

// Marks the first invalid reason wins; valid set of the result is the
// intersection of the two inputs.
FieldMask merge(const FieldMask& a, const FieldMask& b);

struct ArtifactParams {
  double dark_thresh = 0.12;  // luma threshold shared by all detectors
  int min_band_cols = 3;
  double circle_min_circularity = 0.8;
  double circle_min_area_frac = 0.0001;
  double circle_max_area_frac = 0.05;
  double circle_border_ring = 0.25;
};

// Contiguous dark column runs touching the left/right border (and dark row
// runs touching top/bottom) of at least min_cols width become invalid.
FieldMask detect_lateral_bands(const RasterImage& rgb, double dark_thresh,
                               int min_cols);

// Flood fill of dark pixels from the four corners, 8-connected.
FieldMask detect_black_frame(const RasterImage& rgb, double dark_thresh);

// Dark, nearly circular components in the outer border ring become invalid.
// Extends the given field; already-invalid pixels are not revisited.
FieldMask detect_reference_circles(const RasterImage& rgb,
                                   const FieldMask& field,
                                   const ArtifactParams& p = {});

// Replaces invalid pixels by the per-plane mean over valid pixels.
RasterImage neutralize(const RasterImage& rgb, const FieldMask& field);

}  // namespace lesionseg

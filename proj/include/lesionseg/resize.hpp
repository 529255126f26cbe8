#pragma once

#include "lesionseg/image.hpp"

namespace lesionseg {

// Bilinear resampling with half-pixel centers. Per-plane output values stay
// within [min(input), max(input)].
RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);

}  // namespace lesionseg

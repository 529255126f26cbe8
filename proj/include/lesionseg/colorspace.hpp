#pragma once

#include "lesionseg/image.hpp"

namespace lesionseg {

// Full-range BT.601: Y = 0.299R + 0.587G + 0.114B, chroma offset 0.5.
RasterImage rgb_to_ycbcr(const RasterImage& img);

// Hexcone model, H normalized to [0,1). Achromatic pixels get H = 0.
RasterImage rgb_to_hsv(const RasterImage& img);

RasterImage hsv_to_rgb(const RasterImage& img);

// Single plane with luma weights.
RasterImage rgb_to_gray(const RasterImage& img);

// Copies one named plane out as a GRAY image. B1 resolves to the blue plane.
RasterImage extract_plane(const RasterImage& img, ChannelId which);

}  // namespace lesionseg

#pragma once

#include <string>

#include "lesionseg/image.hpp"
#include "lesionseg/mask.hpp"

namespace lesionseg {

// PNG/JPEG decode to an RGB raster, 8-bit values mapped to [0,1].
RasterImage load_rgb(const std::string& path);

// 8-bit RGB PNG/JPEG write; values quantized with rounding.
void save_rgb(const RasterImage& img, const std::string& path);

// 8-bit grayscale PNG, 0 = background, 255 = lesion.
void save_mask_png(const BinaryMask& mask, const std::string& path);

// Grayscale decode; pixels > 127 become lesion.
BinaryMask load_mask(const std::string& path);

}  // namespace lesionseg

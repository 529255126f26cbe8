#pragma once

#include <array>
#include <cstdint>

#include "lesionseg/artifacts.hpp"
#include "lesionseg/image.hpp"
#include "lesionseg/mask.hpp"

namespace lesionseg {

struct NoContrastError : std::runtime_error {
  NoContrastError() : std::runtime_error("otsu: plane has a single value") {}
};

using Histogram = std::array<std::uint64_t, 256>;

// Values quantized by rounding to 256 bins.
inline int value_bin(double v) {
  int b = static_cast<int>(v * 255.0 + 0.5);
  return b < 0 ? 0 : (b > 255 ? 255 : b);
}

Histogram histogram(const RasterImage& plane, const FieldMask& field);

// Cut k maximizing between-class variance; class 0 = bins 0..k. Ties break
// toward the smallest k. Returned threshold (k + 0.5)/255 is the boundary
// between bin k and bin k+1. Throws NoContrastError on a single-bin histogram.
double otsu_from_histogram(const Histogram& h);

double otsu_threshold(const RasterImage& plane, const FieldMask& field);

enum class Polarity { Minority, Dark, Bright };

// Lesion side of the threshold per polarity; Minority picks the side with
// fewer valid pixels (tie -> darker side). Invalid pixels are background.
BinaryMask binarize(const RasterImage& plane, double threshold,
                    const FieldMask& field, Polarity polarity);

inline BinaryMask binarize_minority(const RasterImage& plane, double threshold,
                                    const FieldMask& field) {
  return binarize(plane, threshold, field, Polarity::Minority);
}

}  // namespace lesionseg

#pragma once

#include "lesionseg/image.hpp"

namespace lesionseg {

struct DiffusionParams {
  int iterations = 10;
  double kappa = 30.0 / 255.0;  // conduction threshold, value units
  double lambda = 0.25;         // step size, <= 0.25 for 4-neighbor stability

  void validate() const;
};

// Perona-Malik 4-neighbor scheme with g(d) = exp(-(d/kappa)^2), explicit
// Euler steps. Works plane-wise on multi-plane images.
RasterImage anisotropic_diffusion(const RasterImage& img,
                                  const DiffusionParams& p);

struct ContrastResult {
  RasterImage image;
  bool no_contrast = false;  // quantiles coincided, input returned unchanged
};

// Linear stretch mapping the low/high value quantiles to 0 and 1. Plane-wise.
ContrastResult contrast_enhance(const RasterImage& img, double low_clip = 0.01,
                                double high_clip = 0.99);

// v <- v^gamma on every plane.
RasterImage gamma_compensate(const RasterImage& img, double gamma);

struct ConstancyResult {
  RasterImage image;
  bool skipped = false;  // a plane mean was ~0, input returned unchanged
};

// Gray-world: scale each plane by mean_gray / mean_plane.
ConstancyResult color_constancy_grayworld(const RasterImage& img);

// Per-pixel chromaticity r = R/(R+G+B) etc.; near-black pixels map to
// (1/3, 1/3, 1/3).
RasterImage color_normalize(const RasterImage& img);

}  // namespace lesionseg

#pragma once

#include <string>
#include <vector>

#include "lesionseg/image.hpp"
#include "lesionseg/mask.hpp"

namespace lesionseg {

// Seed-deterministic dermoscopy-like test images: an elliptical darker
// lesion on a textured skin-tone background with optional vignette, lateral
// bands and a reference circle.
struct SynthSpec {
  std::uint32_t seed = 1;
  int count = 10;
  int width = 384;
  int height = 384;
  double axis_min_frac = 0.10;  // lesion semi-axes, fraction of min(w,h)
  double axis_max_frac = 0.22;
  double center_jitter_frac = 0.06;
  double contrast_min = 0.35;  // lesion darkening factor range
  double contrast_max = 0.55;
  double noise_sigma = 0.02;
  double artifact_fraction = 0.0;  // fraction of images carrying artifacts
  bool allow_vignette = true;
  bool allow_bands = true;
  bool allow_circle = true;

  void validate() const;
};

struct SynthImage {
  RasterImage image;
  BinaryMask truth;
  bool has_vignette = false;
  bool has_bands = false;
  bool has_circle = false;
  int band_cols_left = 0;  // exact band widths, for detector tests
  int band_cols_right = 0;
};

SynthImage generate_synth_image(const SynthSpec& spec, int index);

// Writes synth_NNNN.png plus synth_NNNN_segmentation.png per image.
std::vector<std::string> write_synth_corpus(const SynthSpec& spec,
                                            const std::string& out_dir);

}  // namespace lesionseg

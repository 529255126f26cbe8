#include "lesionseg/synth.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "lesionseg/image_io.hpp"

namespace lesionseg {

namespace {

double urand(std::mt19937& rng) {
  const std::uint64_t hi = rng(), lo = rng();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

double urand(std::mt19937& rng, double lo, double hi) {
  return lo + (hi - lo) * urand(rng);
}

double nrand(std::mt19937& rng) {
  // Box-Muller, deterministic across library implementations
  const double u1 = std::max(urand(rng), 1e-300);
  const double u2 = urand(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

void SynthSpec::validate() const {
  if (count < 1 || width < 64 || height < 64)
    throw std::invalid_argument("synth: count >= 1 and size >= 64 required");
  if (!(axis_min_frac > 0.0 && axis_min_frac <= axis_max_frac &&
        axis_max_frac < 0.5))
    throw std::invalid_argument("synth: bad lesion axis range");
  if (!(contrast_min > 0.0 && contrast_min <= contrast_max &&
        contrast_max < 1.0))
    throw std::invalid_argument("synth: bad contrast range");
  if (!(artifact_fraction >= 0.0 && artifact_fraction <= 1.0))
    throw std::invalid_argument("synth: artifact_fraction must be in [0,1]");
}

SynthImage generate_synth_image(const SynthSpec& spec, int index) {
  spec.validate();
  std::mt19937 rng(spec.seed * 1000003u +
                   static_cast<std::uint32_t>(index) * 2654435761u + 17u);
  const int w = spec.width, h = spec.height;
  const double dim = std::min(w, h);

  SynthImage out;
  out.image = RasterImage(w, h, Colorspace::RGB);
  out.truth = BinaryMask(w, h);

  const double skin[3] = {urand(rng, 0.75, 0.90), urand(rng, 0.55, 0.70),
                          urand(rng, 0.42, 0.58)};
  const double lesion_scale = 1.0 - urand(rng, spec.contrast_min,
                                          spec.contrast_max);
  // lesions are brownish: blue drops a bit more than red
  const double lesion[3] = {skin[0] * lesion_scale,
                            skin[1] * lesion_scale * 0.9,
                            skin[2] * lesion_scale * 0.8};

  const double cx = w / 2.0 + urand(rng, -1.0, 1.0) * spec.center_jitter_frac *
                                  dim;
  const double cy = h / 2.0 + urand(rng, -1.0, 1.0) * spec.center_jitter_frac *
                                  dim;
  const double a = urand(rng, spec.axis_min_frac, spec.axis_max_frac) * dim;
  const double b = urand(rng, spec.axis_min_frac, spec.axis_max_frac) * dim;
  const double theta = urand(rng, 0.0, std::numbers::pi);
  const double ct = std::cos(theta), st = std::sin(theta);

  // low-frequency texture
  const double ph1 = urand(rng, 0.0, 2.0 * std::numbers::pi);
  const double ph2 = urand(rng, 0.0, 2.0 * std::numbers::pi);
  const double fx = urand(rng, 1.5, 3.5), fy = urand(rng, 1.5, 3.5);

  const bool with_artifacts = urand(rng) < spec.artifact_fraction;
  if (with_artifacts) {
    out.has_vignette = spec.allow_vignette && urand(rng) < 0.6;
    out.has_bands = spec.allow_bands && urand(rng) < 0.5;
    out.has_circle = spec.allow_circle && urand(rng) < 0.5;
    if (!out.has_vignette && !out.has_bands && !out.has_circle)
      out.has_vignette = spec.allow_vignette;
  }
  if (out.has_bands) {
    out.band_cols_left = 8 + static_cast<int>(urand(rng) * 22.0);
    out.band_cols_right = 8 + static_cast<int>(urand(rng) * 22.0);
  }
  const double vignette_r = 0.48 * dim;
  const double circle_r = urand(rng, 0.030, 0.045) * dim;
  const double circle_cx = 0.14 * w + urand(rng, -4.0, 4.0);
  const double circle_cy = 0.5 * h + urand(rng, -0.1, 0.1) * h;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double ex = (dx * ct + dy * st) / a;
      const double ey = (-dx * st + dy * ct) / b;
      const bool in_lesion = ex * ex + ey * ey <= 1.0;
      if (in_lesion) out.truth.set(x, y, true);

      const double tex =
          0.025 * std::sin(fx * 2.0 * std::numbers::pi * x / w + ph1) +
          0.025 * std::sin(fy * 2.0 * std::numbers::pi * y / h + ph2);

      bool dark = false;
      if (out.has_vignette) {
        const double vx = x - w / 2.0, vy = y - h / 2.0;
        dark = vx * vx + vy * vy > vignette_r * vignette_r;
      }
      if (!dark && out.has_bands)
        dark = x < out.band_cols_left || x >= w - out.band_cols_right;
      if (!dark && out.has_circle) {
        const double rx = x - circle_cx, ry = y - circle_cy;
        dark = rx * rx + ry * ry <= circle_r * circle_r;
      }

      for (int p = 0; p < 3; ++p) {
        double v;
        if (dark)
          v = 0.03;
        else
          v = (in_lesion ? lesion[p] : skin[p]) + tex;
        v += spec.noise_sigma * nrand(rng);
        out.image.set(p, x, y, v);
      }
    }
  }
  return out;
}

std::vector<std::string> write_synth_corpus(const SynthSpec& spec,
                                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> stems;
  for (int i = 0; i < spec.count; ++i) {
    const SynthImage img = generate_synth_image(spec, i);
    char stem[32];
    std::snprintf(stem, sizeof(stem), "synth_%04d", i);
    save_rgb(img.image, (fs::path(out_dir) / (std::string(stem) + ".png"))
                            .string());
    save_mask_png(img.truth,
                  (fs::path(out_dir) / (std::string(stem) + "_segmentation.png"))
                      .string());
    stems.emplace_back(stem);
  }
  return stems;
}

}  // namespace lesionseg

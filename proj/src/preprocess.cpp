#include "lesionseg/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace lesionseg {

void DiffusionParams::validate() const {
  if (iterations < 1)
    throw std::invalid_argument("DiffusionParams: iterations must be >= 1");
  if (!(lambda > 0.0 && lambda <= 0.25))
    throw std::invalid_argument("DiffusionParams: lambda must be in (0, 0.25]");
  if (!(kappa > 0.0))
    throw std::invalid_argument("DiffusionParams: kappa must be > 0");
}

namespace {

void diffuse_plane(std::vector<double>& v, int w, int h,
                   const DiffusionParams& p) {
  std::vector<double> next(v.size());
  const double inv_k2 = 1.0 / (p.kappa * p.kappa);
  for (int it = 0; it < p.iterations; ++it) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double c = v[i];
        double flux = 0.0;
        auto add = [&](double n) {
          const double d = n - c;
          flux += std::exp(-d * d * inv_k2) * d;
        };
        // zero-flux borders: missing neighbors contribute nothing
        if (x > 0) add(v[i - 1]);
        if (x + 1 < w) add(v[i + 1]);
        if (y > 0) add(v[i - w]);
        if (y + 1 < h) add(v[i + w]);
        // clamp to the running range so rounding cannot break the
        // discrete extremum principle
        next[i] = std::clamp(c + p.lambda * flux, lo, hi);
      }
    }
    v.swap(next);
  }
}

std::pair<double, double> quantiles(std::vector<double> vals, double lo,
                                    double hi) {
  std::sort(vals.begin(), vals.end());
  auto q = [&](double f) {
    const double pos = f * (vals.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - i;
    if (i + 1 >= vals.size()) return vals.back();
    return vals[i] * (1.0 - frac) + vals[i + 1] * frac;
  };
  return {q(lo), q(hi)};
}

}  // namespace

RasterImage anisotropic_diffusion(const RasterImage& img,
                                  const DiffusionParams& p) {
  p.validate();
  RasterImage out = img;
  for (auto& plane : out.planes)
    diffuse_plane(plane, img.width, img.height, p);
  return out;
}

ContrastResult contrast_enhance(const RasterImage& img, double low_clip,
                                double high_clip) {
  if (!(low_clip >= 0.0 && low_clip < high_clip && high_clip <= 1.0))
    throw std::invalid_argument(
        "contrast_enhance: need 0 <= low_clip < high_clip <= 1");
  ContrastResult res{img, false};
  for (auto& plane : res.image.planes) {
    const auto [qlo, qhi] = quantiles(plane, low_clip, high_clip);
    if (qhi - qlo < 1e-12) {
      res.no_contrast = true;
      continue;  // degenerate plane left unchanged
    }
    const double scale = 1.0 / (qhi - qlo);
    for (double& v : plane) v = clamp01((v - qlo) * scale);
  }
  return res;
}

RasterImage gamma_compensate(const RasterImage& img, double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("gamma_compensate: gamma must be > 0");
  RasterImage out = img;
  for (auto& plane : out.planes)
    for (double& v : plane) v = clamp01(std::pow(v, gamma));
  return out;
}

ConstancyResult color_constancy_grayworld(const RasterImage& img) {
  img.require(Colorspace::RGB, "color_constancy_grayworld");
  double mean[3] = {0.0, 0.0, 0.0};
  const std::size_t n = img.pixel_count();
  for (int p = 0; p < 3; ++p) {
    for (double v : img.planes[p]) mean[p] += v;
    mean[p] /= static_cast<double>(n);
  }
  if (mean[0] < 1e-6 || mean[1] < 1e-6 || mean[2] < 1e-6)
    return {img, true};
  const double gray = (mean[0] + mean[1] + mean[2]) / 3.0;
  ConstancyResult res{img, false};
  for (int p = 0; p < 3; ++p) {
    const double scale = gray / mean[p];
    for (double& v : res.image.planes[p]) v = clamp01(v * scale);
  }
  return res;
}

RasterImage color_normalize(const RasterImage& img) {
  img.require(Colorspace::RGB, "color_normalize");
  RasterImage out = img;
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double sum =
        img.planes[0][i] + img.planes[1][i] + img.planes[2][i];
    if (sum < 1e-6) {
      for (int p = 0; p < 3; ++p) out.planes[p][i] = 1.0 / 3.0;
    } else {
      for (int p = 0; p < 3; ++p)
        out.planes[p][i] = clamp01(img.planes[p][i] / sum);
    }
  }
  return out;
}

}  // namespace lesionseg

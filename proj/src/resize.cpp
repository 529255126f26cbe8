#include "lesionseg/resize.hpp"

#include <cmath>

namespace lesionseg {

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1)
    throw std::invalid_argument("resize_bilinear: zero-dimension request");
  RasterImage out(out_w, out_h, img.colorspace);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int p = 0; p < img.plane_cnt(); ++p) {
    const auto& src = img.planes[p];
    auto& dst = out.planes[p];
    for (int y = 0; y < out_h; ++y) {
      double fy = (y + 0.5) * sy - 0.5;
      if (fy < 0.0) fy = 0.0;
      int y0 = static_cast<int>(fy);
      if (y0 > img.height - 1) y0 = img.height - 1;
      const int y1 = std::min(y0 + 1, img.height - 1);
      const double wy = fy - y0;
      for (int x = 0; x < out_w; ++x) {
        double fx = (x + 0.5) * sx - 0.5;
        if (fx < 0.0) fx = 0.0;
        int x0 = static_cast<int>(fx);
        if (x0 > img.width - 1) x0 = img.width - 1;
        const int x1 = std::min(x0 + 1, img.width - 1);
        const double wx = fx - x0;
        // std::lerp keeps each blend inside its endpoint interval
        const double top =
            std::lerp(src[static_cast<std::size_t>(y0) * img.width + x0],
                      src[static_cast<std::size_t>(y0) * img.width + x1], wx);
        const double bot =
            std::lerp(src[static_cast<std::size_t>(y1) * img.width + x0],
                      src[static_cast<std::size_t>(y1) * img.width + x1], wx);
        dst[static_cast<std::size_t>(y) * out_w + x] =
            clamp01(std::lerp(top, bot, wy));
      }
    }
  }
  return out;
}

}  // namespace lesionseg

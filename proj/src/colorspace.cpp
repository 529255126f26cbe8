#include "lesionseg/colorspace.hpp"

#include <cmath>

namespace lesionseg {

RasterImage rgb_to_ycbcr(const RasterImage& img) {
  img.require(Colorspace::RGB, "rgb_to_ycbcr");
  RasterImage out(img.width, img.height, Colorspace::YCbCr);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.planes[0][i];
    const double g = img.planes[1][i];
    const double b = img.planes[2][i];
    out.planes[0][i] = clamp01(0.299 * r + 0.587 * g + 0.114 * b);
    out.planes[1][i] = clamp01(0.5 - 0.168736 * r - 0.331264 * g + 0.5 * b);
    out.planes[2][i] = clamp01(0.5 + 0.5 * r - 0.418688 * g - 0.081312 * b);
  }
  return out;
}

RasterImage rgb_to_hsv(const RasterImage& img) {
  img.require(Colorspace::RGB, "rgb_to_hsv");
  RasterImage out(img.width, img.height, Colorspace::HSV);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.planes[0][i];
    const double g = img.planes[1][i];
    const double b = img.planes[2][i];
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    double h = 0.0;
    if (d > 0.0) {
      if (mx == r)
        h = (g - b) / d;
      else if (mx == g)
        h = 2.0 + (b - r) / d;
      else
        h = 4.0 + (r - g) / d;
      h /= 6.0;
      if (h < 0.0) h += 1.0;
      if (h >= 1.0) h -= 1.0;
    }
    out.planes[0][i] = clamp01(h);
    out.planes[1][i] = mx > 0.0 ? clamp01(d / mx) : 0.0;
    out.planes[2][i] = mx;
  }
  return out;
}

RasterImage hsv_to_rgb(const RasterImage& img) {
  img.require(Colorspace::HSV, "hsv_to_rgb");
  RasterImage out(img.width, img.height, Colorspace::RGB);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double h = img.planes[0][i];
    const double s = img.planes[1][i];
    const double v = img.planes[2][i];
    double r = v, g = v, b = v;
    if (s > 0.0) {
      double hh = h * 6.0;
      if (hh >= 6.0) hh = 0.0;
      const int sector = static_cast<int>(hh);
      const double f = hh - sector;
      const double p = v * (1.0 - s);
      const double q = v * (1.0 - s * f);
      const double t = v * (1.0 - s * (1.0 - f));
      switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
      }
    }
    out.planes[0][i] = clamp01(r);
    out.planes[1][i] = clamp01(g);
    out.planes[2][i] = clamp01(b);
  }
  return out;
}

RasterImage rgb_to_gray(const RasterImage& img) {
  img.require(Colorspace::RGB, "rgb_to_gray");
  RasterImage out(img.width, img.height, Colorspace::Gray);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i)
    out.planes[0][i] = clamp01(
        luma(img.planes[0][i], img.planes[1][i], img.planes[2][i]));
  return out;
}

namespace {

int plane_index(Colorspace cs, ChannelId which) {
  switch (cs) {
    case Colorspace::RGB:
      if (which == ChannelId::R) return 0;
      if (which == ChannelId::G) return 1;
      if (which == ChannelId::B || which == ChannelId::B1) return 2;
      break;
    case Colorspace::YCbCr:
      if (which == ChannelId::Y) return 0;
      if (which == ChannelId::Cb) return 1;
      if (which == ChannelId::Cr) return 2;
      break;
    case Colorspace::HSV:
      if (which == ChannelId::H) return 0;
      if (which == ChannelId::S) return 1;
      if (which == ChannelId::V) return 2;
      break;
    case Colorspace::Gray:
      if (which == ChannelId::Y) return 0;
      break;
  }
  return -1;
}

}  // namespace

RasterImage extract_plane(const RasterImage& img, ChannelId which) {
  const int p = plane_index(img.colorspace, which);
  if (p < 0)
    throw std::invalid_argument("extract_plane: channel " + to_string(which) +
                                " not present in " + to_string(img.colorspace) +
                                " image");
  RasterImage out(img.width, img.height, Colorspace::Gray);
  out.planes[0] = img.planes[p];
  return out;
}

}  // namespace lesionseg

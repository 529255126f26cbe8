#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace lesionseg {

enum class Colorspace { RGB, YCbCr, HSV, Gray };

// The ten segmentation channels. B1 is the blue plane under its second
// preprocessing recipe and aliases the B plane at extraction time.
enum class ChannelId { R, G, B, Y, Cb, Cr, H, S, V, B1 };

inline constexpr int kNumChannels = 10;

inline constexpr std::array<ChannelId, kNumChannels> kAllChannels = {
    ChannelId::R,  ChannelId::G, ChannelId::B, ChannelId::Y, ChannelId::Cb,
    ChannelId::Cr, ChannelId::H, ChannelId::S, ChannelId::V, ChannelId::B1};

std::string to_string(ChannelId c);
ChannelId channel_from_string(const std::string& s);

std::string to_string(Colorspace cs);

inline int plane_count(Colorspace cs) {
  return cs == Colorspace::Gray ? 1 : 3;
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Planar raster with values in [0,1]. Planes are row-major height*width.
struct RasterImage {
  int width = 0;
  int height = 0;
  Colorspace colorspace = Colorspace::Gray;
  std::vector<std::vector<double>> planes;

  RasterImage() = default;
  RasterImage(int w, int h, Colorspace cs, double fill = 0.0);

  int plane_cnt() const { return static_cast<int>(planes.size()); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  double at(int plane, int x, int y) const {
    return planes[plane][static_cast<std::size_t>(y) * width + x];
  }
  void set(int plane, int x, int y, double v) {
    planes[plane][static_cast<std::size_t>(y) * width + x] = clamp01(v);
  }

  void require(Colorspace cs, const char* op) const;
};

// Luma of an RGB pixel, BT.601 weights.
inline double luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace lesionseg

#include "lesionseg/image.hpp"

namespace lesionseg {

RasterImage::RasterImage(int w, int h, Colorspace cs, double fill) {
  if (w < 1 || h < 1)
    throw std::invalid_argument("RasterImage: dimensions must be >= 1");
  width = w;
  height = h;
  colorspace = cs;
  planes.assign(plane_count(cs),
                std::vector<double>(static_cast<std::size_t>(w) * h,
                                    clamp01(fill)));
}

void RasterImage::require(Colorspace cs, const char* op) const {
  if (colorspace != cs)
    throw std::invalid_argument(std::string(op) + ": expected " +
                                to_string(cs) + " input, got " +
                                to_string(colorspace));
}

std::string to_string(ChannelId c) {
  switch (c) {
    case ChannelId::R: return "R";
    case ChannelId::G: return "G";
    case ChannelId::B: return "B";
    case ChannelId::Y: return "Y";
    case ChannelId::Cb: return "Cb";
    case ChannelId::Cr: return "Cr";
    case ChannelId::H: return "H";
    case ChannelId::S: return "S";
    case ChannelId::V: return "V";
    case ChannelId::B1: return "B1";
  }
  return "?";
}

ChannelId channel_from_string(const std::string& s) {
  for (ChannelId c : kAllChannels)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown channel id: " + s);
}

std::string to_string(Colorspace cs) {
  switch (cs) {
    case Colorspace::RGB: return "RGB";
    case Colorspace::YCbCr: return "YCbCr";
    case Colorspace::HSV: return "HSV";
    case Colorspace::Gray: return "GRAY";
  }
  return "?";
}

}  // namespace lesionseg

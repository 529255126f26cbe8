#include "lesionseg/recipe.hpp"

#include <optional>

#include "lesionseg/colorspace.hpp"

namespace lesionseg {

std::string to_string(RecipeStep s) {
  switch (s) {
    case RecipeStep::AnisotropicDiffusion: return "diffusion";
    case RecipeStep::ContrastEnhancement: return "contrast";
    case RecipeStep::ColorConstancy: return "constancy";
    case RecipeStep::GammaCompensation: return "gamma";
    case RecipeStep::ColorNormalization: return "normalize";
    case RecipeStep::ToYCbCr: return "to_ycbcr";
    case RecipeStep::ToHSV: return "to_hsv";
    case RecipeStep::ToRGB: return "to_rgb";
    case RecipeStep::ToGray: return "to_gray";
  }
  return "?";
}

RecipeStep recipe_step_from_string(const std::string& s) {
  for (RecipeStep st :
       {RecipeStep::AnisotropicDiffusion, RecipeStep::ContrastEnhancement,
        RecipeStep::ColorConstancy, RecipeStep::GammaCompensation,
        RecipeStep::ColorNormalization, RecipeStep::ToYCbCr, RecipeStep::ToHSV,
        RecipeStep::ToRGB, RecipeStep::ToGray})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown recipe step: " + s);
}

namespace {

bool plane_present(Colorspace cs, ChannelId c) {
  switch (c) {
    case ChannelId::R:
    case ChannelId::G:
    case ChannelId::B:
    case ChannelId::B1:
      return cs == Colorspace::RGB;
    case ChannelId::Y:
      return cs == Colorspace::YCbCr || cs == Colorspace::Gray;
    case ChannelId::Cb:
    case ChannelId::Cr:
      return cs == Colorspace::YCbCr;
    case ChannelId::H:
    case ChannelId::S:
    case ChannelId::V:
      return cs == Colorspace::HSV;
  }
  return false;
}

std::optional<Colorspace> simulate(const std::vector<RecipeStep>& steps) {
  Colorspace cs = Colorspace::RGB;
  for (RecipeStep s : steps) {
    switch (s) {
      case RecipeStep::ToYCbCr:
        if (cs != Colorspace::RGB) return std::nullopt;
        cs = Colorspace::YCbCr;
        break;
      case RecipeStep::ToHSV:
        if (cs != Colorspace::RGB) return std::nullopt;
        cs = Colorspace::HSV;
        break;
      case RecipeStep::ToRGB:
        if (cs != Colorspace::HSV) return std::nullopt;
        cs = Colorspace::RGB;
        break;
      case RecipeStep::ToGray:
        if (cs != Colorspace::RGB) return std::nullopt;
        cs = Colorspace::Gray;
        break;
      case RecipeStep::ColorConstancy:
      case RecipeStep::ColorNormalization:
        if (cs != Colorspace::RGB) return std::nullopt;
        break;
      default:
        break;  // plane-wise operators, any state
    }
  }
  return cs;
}

std::optional<RecipeStep> home_conversion(ChannelId c) {
  switch (c) {
    case ChannelId::Y:
    case ChannelId::Cb:
    case ChannelId::Cr:
      return RecipeStep::ToYCbCr;
    case ChannelId::H:
    case ChannelId::S:
    case ChannelId::V:
      return RecipeStep::ToHSV;
    default:
      return std::nullopt;  // RGB channels need no conversion
  }
}

}  // namespace

Recipe::Recipe(std::string id, ChannelId channel,
               std::vector<RecipeStep> steps, RecipeParams params)
    : id_(std::move(id)), channel_(channel), steps_(std::move(steps)),
      params_(params) {
  auto final_cs = simulate(steps_);
  if (final_cs && plane_present(*final_cs, channel_)) return;
  if (final_cs) {
    // try reaching the channel's home colorspace before the first step
    if (auto conv = home_conversion(channel_)) {
      std::vector<RecipeStep> prefixed;
      prefixed.reserve(steps_.size() + 1);
      prefixed.push_back(*conv);
      prefixed.insert(prefixed.end(), steps_.begin(), steps_.end());
      auto cs2 = simulate(prefixed);
      if (cs2 && plane_present(*cs2, channel_)) {
        steps_ = std::move(prefixed);
        return;
      }
    }
  }
  throw std::invalid_argument("recipe '" + id_ +
                              "' is not colorspace-consistent for channel " +
                              to_string(channel_));
}

int Recipe::operator_count() const {
  int n = 0;
  for (RecipeStep s : steps_)
    switch (s) {
      case RecipeStep::AnisotropicDiffusion:
      case RecipeStep::ContrastEnhancement:
      case RecipeStep::ColorConstancy:
      case RecipeStep::GammaCompensation:
      case RecipeStep::ColorNormalization:
        ++n;
        break;
      default:
        break;
    }
  return n;
}

RasterImage apply_recipe(const RasterImage& rgb, const Recipe& recipe) {
  rgb.require(Colorspace::RGB, "apply_recipe");
  const RecipeParams& p = recipe.params();
  RasterImage img = rgb;
  for (RecipeStep s : recipe.steps()) {
    switch (s) {
      case RecipeStep::AnisotropicDiffusion:
        img = anisotropic_diffusion(img, p.diffusion);
        break;
      case RecipeStep::ContrastEnhancement:
        img = contrast_enhance(img, p.contrast_low_clip, p.contrast_high_clip)
                  .image;
        break;
      case RecipeStep::ColorConstancy:
        img = color_constancy_grayworld(img).image;
        break;
      case RecipeStep::GammaCompensation:
        img = gamma_compensate(img, p.gamma);
        break;
      case RecipeStep::ColorNormalization:
        img = color_normalize(img);
        break;
      case RecipeStep::ToYCbCr:
        img = rgb_to_ycbcr(img);
        break;
      case RecipeStep::ToHSV:
        img = rgb_to_hsv(img);
        break;
      case RecipeStep::ToRGB:
        img = hsv_to_rgb(img);
        break;
      case RecipeStep::ToGray:
        img = rgb_to_gray(img);
        break;
    }
  }
  if (img.colorspace == Colorspace::Gray) return img;
  return extract_plane(img, recipe.channel());
}

std::vector<Recipe> table_recipes(const RecipeParams& params) {
  using S = RecipeStep;
  const std::vector<S> long_chain = {S::GammaCompensation, S::ColorConstancy,
                                     S::ToHSV, S::AnisotropicDiffusion,
                                     S::ContrastEnhancement, S::ToRGB};
  std::vector<Recipe> out;
  out.emplace_back("table_R", ChannelId::R,
                   std::vector<S>{S::ColorNormalization,
                                  S::ContrastEnhancement},
                   params);
  out.emplace_back("table_G", ChannelId::G, long_chain, params);
  out.emplace_back("table_B", ChannelId::B,
                   std::vector<S>{S::ContrastEnhancement}, params);
  {
    std::vector<S> y = long_chain;
    y.push_back(S::ToGray);
    out.emplace_back("table_Y", ChannelId::Y, y, params);
  }
  out.emplace_back("table_Cb", ChannelId::Cb,
                   std::vector<S>{S::AnisotropicDiffusion}, params);
  out.emplace_back("table_Cr", ChannelId::Cr,
                   std::vector<S>{S::AnisotropicDiffusion}, params);
  out.emplace_back("table_H", ChannelId::H,
                   std::vector<S>{S::AnisotropicDiffusion,
                                  S::ContrastEnhancement},
                   params);
  out.emplace_back("table_S", ChannelId::S,
                   std::vector<S>{S::GammaCompensation, S::ColorConstancy,
                                  S::ToHSV, S::ContrastEnhancement},
                   params);
  out.emplace_back("table_V", ChannelId::V,
                   std::vector<S>{S::GammaCompensation, S::ColorConstancy,
                                  S::ToHSV},
                   params);
  out.emplace_back("table_B1", ChannelId::B1, long_chain, params);
  return out;
}

}  // namespace lesionseg

#pragma once

#include <string>
#include <vector>

#include "lesionseg/image.hpp"
#include "lesionseg/preprocess.hpp"

namespace lesionseg {

enum class RecipeStep {
  AnisotropicDiffusion,
  ContrastEnhancement,
  ColorConstancy,
  GammaCompensation,
  ColorNormalization,
  ToYCbCr,
  ToHSV,
  ToRGB,
  ToGray
};

std::string to_string(RecipeStep s);
RecipeStep recipe_step_from_string(const std::string& s);

struct RecipeParams {
  DiffusionParams diffusion;
  double contrast_low_clip = 0.01;
  double contrast_high_clip = 0.99;
  double gamma = 2.2;
};

// Ordered preprocessing steps ending in a state that contains the target
// channel plane. Colorspace consistency is checked at construction; when the
// raw steps cannot reach the channel's home colorspace, the needed conversion
// is prepended (this is how the Cb/Cr/H rows, which list only plane-wise
// operators, reach their planes).
class Recipe {
 public:
  Recipe(std::string id, ChannelId channel, std::vector<RecipeStep> steps,
         RecipeParams params = {});

  const std::string& id() const { return id_; }
  ChannelId channel() const { return channel_; }
  const std::vector<RecipeStep>& steps() const { return steps_; }
  const RecipeParams& params() const { return params_; }
  // number of preprocessing operators, conversions excluded; used to break
  // ranking ties toward less preprocessing
  int operator_count() const;

 private:
  std::string id_;
  ChannelId channel_;
  std::vector<RecipeStep> steps_;
  RecipeParams params_;
};

// Runs the steps on an RGB input (plane-wise for scalar operators on
// multi-plane states), then extracts the recipe's channel plane.
RasterImage apply_recipe(const RasterImage& rgb, const Recipe& recipe);

// The ten built-in per-channel recipes, in channel order R..B1.
std::vector<Recipe> table_recipes(const RecipeParams& params = {});

}  // namespace lesionseg

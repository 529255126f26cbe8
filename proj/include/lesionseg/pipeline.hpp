#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lesionseg/artifacts.hpp"
#include "lesionseg/features.hpp"
#include "lesionseg/image.hpp"
#include "lesionseg/mask.hpp"
#include "lesionseg/mlp.hpp"
#include "lesionseg/otsu.hpp"
#include "lesionseg/recipe.hpp"
#include "lesionseg/regions.hpp"

namespace lesionseg {

struct PipelineConfig {
  int working_size = 500;
  double decision_threshold = 0.5;  // route 8_1 when best prediction exceeds

  ArtifactParams artifacts;
  RecipeParams recipe_params;

  double min_area_frac = 0.002;
  double min_extent = 0.2;
  double min_solidity = 0.4;
  int open_close_radius = 5;
  Polarity polarity = Polarity::Minority;

  void validate() const;
};

struct ModelSet {
  std::array<MlpModel, kNumChannels> models;  // indexed in kAllChannels order

  const MlpModel& for_channel(ChannelId c) const;
};

enum class Route { Step8_1, Step8_2, Fallback };

std::string to_string(Route r);

struct ChannelOutcome {
  ChannelId channel;
  bool has_candidate = false;
  std::string skip_reason;  // set when has_candidate is false
  FeatureVector features{};
  double predicted_jaccard = 0.0;
};

struct PipelineResult {
  BinaryMask mask;  // at the original input resolution
  ChannelId chosen_channel = ChannelId::R;
  Route route = Route::Fallback;
  double predicted_jaccard = 0.0;
  std::vector<ChannelOutcome> per_channel;  // outcomes of the taken route
  std::map<std::string, double> timings_ms;
};

// Steps 1-9 for one RGB image. Throws on degenerate input.
PipelineResult segment_image(const RasterImage& rgb, const ModelSet& models,
                             const PipelineConfig& cfg);

// Per-channel candidate segmentation on the already prepared working frame
// (steps 6-7, optional 8_2 morphology). Shared by the pipeline, the training
// row builder and the experiment runner.
struct ChannelSegmentation {
  bool ok = false;
  std::string skip_reason;
  RasterImage plane;  // preprocessed channel plane
  BinaryMask mask;    // selected candidate only
  RegionCandidate candidate;
};

ChannelSegmentation segment_channel(const RasterImage& neutral_rgb,
                                    const Recipe& recipe,
                                    const FieldMask& field,
                                    const PipelineConfig& cfg,
                                    bool with_morphology);

// Steps 1-5 shared state for one image.
struct WorkingFrame {
  RasterImage rgb;       // resized + neutralized
  RasterImage ycbcr;     // of the resized image, for intensity features
  FieldMask field;
  int orig_w = 0, orig_h = 0;
};

WorkingFrame prepare_frame(const RasterImage& rgb, const PipelineConfig& cfg);

struct TrainingRow {
  std::string image_id;
  ChannelId channel;
  FeatureVector features;
  double true_jaccard;
};

// Steps 1-7 per channel; the true Jaccard is measured against the truth mask
// resized (nearest) to the working frame. Channels without a surviving
// candidate emit no row.
std::vector<TrainingRow> build_training_rows(const std::string& image_id,
                                             const RasterImage& rgb,
                                             const BinaryMask& truth,
                                             const PipelineConfig& cfg);

}  // namespace lesionseg

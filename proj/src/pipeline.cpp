#include "lesionseg/pipeline.hpp"

#include <chrono>

#include "lesionseg/colorspace.hpp"
#include "lesionseg/morphology.hpp"
#include "lesionseg/resize.hpp"

namespace lesionseg {

void PipelineConfig::validate() const {
  if (working_size < 64)
    throw std::invalid_argument("pipeline: working_size must be >= 64");
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0))
    throw std::invalid_argument(
        "pipeline: decision_threshold must be in (0,1)");
  if (open_close_radius < 1)
    throw std::invalid_argument("pipeline: open_close_radius must be >= 1");
  recipe_params.diffusion.validate();
}

const MlpModel& ModelSet::for_channel(ChannelId c) const {
  for (std::size_t i = 0; i < kAllChannels.size(); ++i)
    if (kAllChannels[i] == c) return models[i];
  throw std::invalid_argument("ModelSet: unknown channel");
}

std::string to_string(Route r) {
  switch (r) {
    case Route::Step8_1: return "step8_1";
    case Route::Step8_2: return "step8_2";
    case Route::Fallback: return "fallback";
  }
  return "?";
}

WorkingFrame prepare_frame(const RasterImage& rgb, const PipelineConfig& cfg) {
  rgb.require(Colorspace::RGB, "segment_image");
  WorkingFrame f;
  f.orig_w = rgb.width;
  f.orig_h = rgb.height;
  RasterImage work = resize_bilinear(rgb, cfg.working_size, cfg.working_size);

  const ArtifactParams& ap = cfg.artifacts;
  FieldMask bands =
      detect_lateral_bands(work, ap.dark_thresh, ap.min_band_cols);
  FieldMask frame = detect_black_frame(work, ap.dark_thresh);
  FieldMask field = merge(bands, frame);
  field = detect_reference_circles(work, field, ap);

  f.rgb = neutralize(work, field);
  f.ycbcr = rgb_to_ycbcr(f.rgb);
  f.field = std::move(field);
  return f;
}

ChannelSegmentation segment_channel(const RasterImage& neutral_rgb,
                                    const Recipe& recipe,
                                    const FieldMask& field,
                                    const PipelineConfig& cfg,
                                    bool with_morphology) {
  ChannelSegmentation out;
  out.plane = apply_recipe(neutral_rgb, recipe);
  double threshold;
  try {
    threshold = otsu_threshold(out.plane, field);
  } catch (const NoContrastError&) {
    out.skip_reason = "no_contrast";
    return out;
  }
  BinaryMask mask = binarize(out.plane, threshold, field, cfg.polarity);
  if (with_morphology) {
    mask = open_close(mask, cfg.open_close_radius);
    // closing may have grown into artifact pixels
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
      if (field.reason[i] != FieldReason::None) mask.bits[i] = 0;
  }
  const auto cands = connected_components(mask);
  const auto kept = filter_candidates(
      cands, static_cast<double>(mask.width) * mask.height,
      cfg.min_area_frac, cfg.min_extent, cfg.min_solidity);
  auto chosen = select_center(kept, mask.width, mask.height);
  if (!chosen) {
    out.skip_reason = "no_candidate";
    return out;
  }
  out.ok = true;
  out.candidate = std::move(*chosen);
  out.mask = mask_from_candidate(out.candidate, mask.width, mask.height);
  return out;
}

namespace {

struct RoutePass {
  std::vector<ChannelOutcome> outcomes;
  std::vector<BinaryMask> masks;  // parallel to outcomes, empty when skipped
  int best = -1;                  // index of the best predicted channel
};

RoutePass run_pass(const WorkingFrame& frame, const std::vector<Recipe>& recipes,
                   const ModelSet& models, const PipelineConfig& cfg,
                   bool with_morphology) {
  RoutePass pass;
  for (const Recipe& recipe : recipes) {
    ChannelOutcome oc;
    oc.channel = recipe.channel();
    BinaryMask mask;
    ChannelSegmentation seg =
        segment_channel(frame.rgb, recipe, frame.field, cfg, with_morphology);
    if (seg.ok) {
      try {
        oc.features = assemble_features(seg.candidate, seg.plane, frame.ycbcr,
                                        seg.mask, frame.field,
                                        cfg.working_size, cfg.working_size);
        oc.has_candidate = true;
        oc.predicted_jaccard =
            forward(models.for_channel(oc.channel), oc.features);
        mask = std::move(seg.mask);
      } catch (const NoBackgroundError&) {
        oc.skip_reason = "no_background";
      }
    } else {
      oc.skip_reason = seg.skip_reason;
    }
    // ties keep the earlier channel in the fixed R..B1 order
    if (oc.has_candidate &&
        (pass.best < 0 ||
         oc.predicted_jaccard >
             pass.outcomes[pass.best].predicted_jaccard)) {
      pass.best = static_cast<int>(pass.outcomes.size());
    }
    pass.outcomes.push_back(std::move(oc));
    pass.masks.push_back(std::move(mask));
  }
  return pass;
}

}  // namespace

PipelineResult segment_image(const RasterImage& rgb, const ModelSet& models,
                             const PipelineConfig& cfg) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0)
        .count();
  };

  PipelineResult res;
  auto t0 = clock::now();
  const WorkingFrame frame = prepare_frame(rgb, cfg);
  res.timings_ms["prepare"] = ms_since(t0);

  const std::vector<Recipe> recipes = table_recipes(cfg.recipe_params);

  t0 = clock::now();
  RoutePass first = run_pass(frame, recipes, models, cfg, false);
  res.timings_ms["pass1"] = ms_since(t0);

  const bool take_first =
      first.best >= 0 && first.outcomes[first.best].predicted_jaccard >
                             cfg.decision_threshold;
  BinaryMask working_mask(cfg.working_size, cfg.working_size);
  if (take_first) {
    res.route = Route::Step8_1;
    res.chosen_channel = first.outcomes[first.best].channel;
    res.predicted_jaccard = first.outcomes[first.best].predicted_jaccard;
    working_mask = std::move(first.masks[first.best]);
    res.per_channel = std::move(first.outcomes);
  } else {
    t0 = clock::now();
    RoutePass second = run_pass(frame, recipes, models, cfg, true);
    res.timings_ms["pass2"] = ms_since(t0);
    if (second.best >= 0) {
      res.route = Route::Step8_2;
      res.chosen_channel = second.outcomes[second.best].channel;
      res.predicted_jaccard = second.outcomes[second.best].predicted_jaccard;
      working_mask = std::move(second.masks[second.best]);
      res.per_channel = std::move(second.outcomes);
    } else {
      res.route = Route::Fallback;  // no candidate on either route
      res.per_channel = std::move(second.outcomes);
    }
  }

  t0 = clock::now();
  res.mask = resize_mask_nearest(working_mask, frame.orig_w, frame.orig_h);
  res.timings_ms["finalize"] = ms_since(t0);
  return res;
}

std::vector<TrainingRow> build_training_rows(const std::string& image_id,
                                             const RasterImage& rgb,
                                             const BinaryMask& truth,
                                             const PipelineConfig& cfg) {
  cfg.validate();
  if (truth.width != rgb.width || truth.height != rgb.height)
    throw std::invalid_argument(image_id +
                                ": truth mask size differs from image");
  const WorkingFrame frame = prepare_frame(rgb, cfg);
  const BinaryMask truth_work =
      resize_mask_nearest(truth, cfg.working_size, cfg.working_size);

  std::vector<TrainingRow> rows;
  for (const Recipe& recipe : table_recipes(cfg.recipe_params)) {
    ChannelSegmentation seg =
        segment_channel(frame.rgb, recipe, frame.field, cfg, false);
    if (!seg.ok) continue;
    TrainingRow row;
    row.image_id = image_id;
    row.channel = recipe.channel();
    try {
      row.features = assemble_features(seg.candidate, seg.plane, frame.ycbcr,
                                       seg.mask, frame.field,
                                       cfg.working_size, cfg.working_size);
    } catch (const NoBackgroundError&) {
      continue;
    }
    row.true_jaccard = jaccard(seg.mask, truth_work);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lesionseg

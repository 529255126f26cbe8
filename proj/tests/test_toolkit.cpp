#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <json.hpp>

#include "lesionseg/config.hpp"
#include "lesionseg/eval.hpp"
#include "lesionseg/synth.hpp"

using namespace lesionseg;
using nlohmann::json;

TEST_CASE("parse_config reads every group") {
  const PipelineConfig cfg = parse_config(R"({
    "pipeline": {"working_size": 256, "decision_threshold": 0.6},
    "artifacts": {"dark_thresh": 0.1, "min_band_cols": 4},
    "preprocess": {"diffusion_iterations": 5, "gamma": 2.0},
    "segment": {"min_extent": 0.25, "polarity": "dark"}
  })");
  CHECK(cfg.working_size == 256);
  CHECK(cfg.decision_threshold == 0.6);
  CHECK(cfg.artifacts.dark_thresh == 0.1);
  CHECK(cfg.artifacts.min_band_cols == 4);
  CHECK(cfg.recipe_params.diffusion.iterations == 5);
  CHECK(cfg.recipe_params.gamma == 2.0);
  CHECK(cfg.min_extent == 0.25);
  CHECK(cfg.polarity == Polarity::Dark);
  // untouched keys keep defaults
  CHECK(cfg.min_solidity == 0.4);
  CHECK(cfg.open_close_radius == 5);
}

TEST_CASE("parse_config rejects unknown keys with their path") {
  CHECK_NOTHROW(parse_config("{}"));
  try {
    parse_config(R"({"segment": {"min_extnet": 0.2}})");
    FAIL("expected throw");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("segment.min_extnet") !=
          std::string::npos);
  }
  CHECK_THROWS(parse_config(R"({"pipelines": {}})"));
  CHECK_THROWS(parse_config("not json"));
  CHECK_THROWS(parse_config(R"({"segment": {"polarity": "sideways"}})"));
  // invalid values are caught by validate()
  CHECK_THROWS(parse_config(R"({"pipeline": {"working_size": 8}})"));
}

TEST_CASE("parse_recipes_json builds runnable recipes") {
  const auto recipes = parse_recipes_json(R"([
    {"id": "plain-blue", "channel": "B", "steps": ["contrast"]},
    {"id": "diff-cb", "channel": "Cb", "steps": ["diffusion"]}
  ])",
                                          RecipeParams{});
  REQUIRE(recipes.size() == 2);
  CHECK(recipes[0].id() == "plain-blue");
  CHECK(recipes[0].channel() == ChannelId::B);
  CHECK(recipes[1].channel() == ChannelId::Cb);
  const RasterImage img(16, 16, Colorspace::RGB, 0.4);
  CHECK_NOTHROW(apply_recipe(img, recipes[1]));
  CHECK_THROWS(parse_recipes_json(R"([{"id":"x","channel":"Q","steps":[]}])",
                                  RecipeParams{}));
  CHECK_THROWS(parse_recipes_json(
      R"([{"id":"x","channel":"R","steps":["launder"]}])", RecipeParams{}));
}

TEST_CASE("eval report aggregates are recomputed from the rows") {
  std::vector<EvalRow> rows = {
      {"a", 0.9, "step8_1", "R", 0.8},
      {"b", 0.7, "step8_1", "G", 0.6},
      {"c", 0.85, "step8_2", "V", 0.4},
      {"d", 0.0, "fallback", "", 0.0},
  };
  const EvalReport r = make_eval_report(rows);
  CHECK(r.mean_jaccard == doctest::Approx((0.9 + 0.7 + 0.85 + 0.0) / 4));
  CHECK(r.count_above_08 == 2);
  REQUIRE(r.per_route.size() == 3);
  for (const auto& agg : r.per_route) {
    if (agg.route == "step8_1") {
      CHECK(agg.count == 2);
      CHECK(agg.mean_jaccard == doctest::Approx(0.8));
    } else if (agg.route == "step8_2") {
      CHECK(agg.count == 1);
      CHECK(agg.mean_jaccard == doctest::Approx(0.85));
    } else {
      CHECK(agg.route == "fallback");
      CHECK(agg.count == 1);
    }
  }

  const json doc = json::parse(eval_report_json(r));
  CHECK(doc["aggregates"]["mean_jaccard"].get<double>() ==
        doctest::Approx(r.mean_jaccard));
  CHECK(doc["aggregates"]["count_jaccard_above_0.8"].get<int>() == 2);
  CHECK(doc["per_image"].size() == 4);
  CHECK(doc["aggregates"]["per_route"].size() == 3);
  CHECK(eval_report_table(r).find("step8_2") != std::string::npos);
}

TEST_CASE("feature CSV round trip") {
  std::vector<TrainingRow> rows(3);
  std::mt19937 rng(4);
  std::uniform_real_distribution<> uni(0, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].image_id = "img" + std::to_string(i);
    rows[i].channel = kAllChannels[i * 3];
    std::array<double, 13> a;
    for (double& v : a) v = uni(rng);
    rows[i].features = FeatureVector::from_array(a);
    rows[i].true_jaccard = uni(rng);
  }
  const std::string csv = feature_csv(rows);
  CHECK(csv.rfind("image_id,channel,f1,", 0) == 0);
  const auto back = parse_feature_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].image_id == rows[i].image_id);
    CHECK(back[i].channel == rows[i].channel);
    // %.17g print preserves doubles exactly
    CHECK(back[i].features.as_array() == rows[i].features.as_array());
    CHECK(back[i].true_jaccard == rows[i].true_jaccard);
  }

  CHECK_THROWS(parse_feature_csv("image_id,channel,f1\nx,R,1"));
  try {
    parse_feature_csv(feature_csv(rows) + "bad,R,1,2\n");
    FAIL("expected throw");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("synth generation is deterministic and seed-sensitive") {
  SynthSpec spec;
  spec.seed = 9;
  spec.width = 96;
  spec.height = 96;
  const SynthImage a = generate_synth_image(spec, 3);
  const SynthImage b = generate_synth_image(spec, 3);
  CHECK(a.image.planes == b.image.planes);
  CHECK(a.truth == b.truth);
  spec.seed = 10;
  const SynthImage c = generate_synth_image(spec, 3);
  CHECK(a.image.planes != c.image.planes);
}

TEST_CASE("synth lesions are plausible") {
  SynthSpec spec;
  spec.seed = 2;
  spec.width = 128;
  spec.height = 128;
  for (int i = 0; i < 8; ++i) {
    const SynthImage s = generate_synth_image(spec, i);
    const double area_frac =
        static_cast<double>(s.truth.count()) / (128.0 * 128.0);
    CHECK(area_frac > 0.01);
    CHECK(area_frac < 0.25);
    // lesion darker than skin on the red plane
    double lesion = 0, skin = 0;
    std::size_t nl = 0, ns = 0;
    for (std::size_t p = 0; p < s.image.pixel_count(); ++p) {
      (s.truth.bits[p] ? lesion : skin) += s.image.planes[0][p];
      (s.truth.bits[p] ? nl : ns)++;
    }
    CHECK(lesion / nl < skin / ns - 0.1);
    CHECK_FALSE(s.has_bands);  // artifact_fraction defaults to 0
  }
}

TEST_CASE("synth artifacts appear when requested") {
  SynthSpec spec;
  spec.seed = 6;
  spec.width = 128;
  spec.height = 128;
  spec.artifact_fraction = 1.0;
  int bands = 0, vignettes = 0, circles = 0;
  for (int i = 0; i < 12; ++i) {
    const SynthImage s = generate_synth_image(spec, i);
    bands += s.has_bands;
    vignettes += s.has_vignette;
    circles += s.has_circle;
    if (s.has_bands) {
      CHECK(s.band_cols_left >= 3);
      // left band columns really are dark
      double m = 0;
      for (int y = 0; y < 128; ++y) m += s.image.at(0, 0, y);
      CHECK(m / 128 < 0.1);
    }
  }
  CHECK(bands + vignettes + circles >= 12);  // every image has at least one
  CHECK(bands > 0);
  CHECK(vignettes > 0);
  CHECK(circles > 0);
}

TEST_CASE("experiments rank a dominating recipe first") {
  SynthSpec spec;
  spec.seed = 14;
  spec.width = 128;
  spec.height = 128;
  std::vector<std::pair<RasterImage, BinaryMask>> corpus;
  for (int i = 0; i < 4; ++i) {
    const SynthImage s = generate_synth_image(spec, i);
    corpus.emplace_back(s.image, s.truth);
  }
  // a real recipe vs. one whose plane barely separates lesion from skin
  const auto recipes = parse_recipes_json(R"([
    {"id": "blue-contrast", "channel": "B", "steps": ["contrast"]},
    {"id": "raw-cb", "channel": "Cb", "steps": []}
  ])",
                                          RecipeParams{});
  PipelineConfig cfg;
  cfg.working_size = 128;
  const ExperimentReport r = run_experiments(corpus, recipes, cfg);
  CHECK(r.corpus_size == 4);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].mean_jaccard >= r.entries[1].mean_jaccard);
  std::size_t best_total = 0;
  for (const auto& e : r.entries) best_total += e.best_count;
  CHECK(best_total >= 4);  // every image credits at least one recipe

  const json doc = json::parse(experiment_report_json(r));
  CHECK(doc["ranking"].size() == 2);
  CHECK(doc["corpus_size"].get<int>() == 4);
  CHECK(experiment_report_table(r).find("blue-contrast") != std::string::npos);
}

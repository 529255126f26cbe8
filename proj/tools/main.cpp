#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lesionseg/config.hpp"
#include "lesionseg/eval.hpp"
#include "lesionseg/image_io.hpp"
#include "lesionseg/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lesionseg;

namespace {

bool is_image_file(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".PNG" ||
         ext == ".JPG" || ext == ".JPEG";
}

bool is_truth_file(const fs::path& p) {
  return p.stem().string().ends_with("_segmentation");
}

std::vector<fs::path> list_images(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && is_image_file(e.path()) &&
        !is_truth_file(e.path()))
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// bounded fan-out with deterministic result order
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

PipelineConfig config_from(const std::string& path) {
  if (path.empty()) return {};
  return load_config_file(path);
}

ModelSet load_models(const std::string& dir) {
  ModelSet set;
  for (std::size_t i = 0; i < kAllChannels.size(); ++i) {
    const fs::path p =
        fs::path(dir) / ("mlp_" + to_string(kAllChannels[i]) + ".json");
    if (!fs::exists(p))
      throw std::runtime_error("missing model file: " + p.string());
    set.models[i] = load_model_file(p.string());
    if (set.models[i].channel != kAllChannels[i])
      throw std::runtime_error(p.string() + ": channel mismatch");
  }
  return set;
}

int cmd_segment(const std::vector<std::string>& inputs,
                const std::string& models_dir, const std::string& out_dir,
                const std::string& config_path, int jobs) {
  const PipelineConfig cfg = config_from(config_path);
  const ModelSet models = load_models(models_dir);  // fail before processing
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      auto listed = list_images(in);
      files.insert(files.end(), listed.begin(), listed.end());
    } else {
      files.emplace_back(in);
    }
  }
  if (files.empty()) {
    std::cerr << "segment: no input images\n";
    return 1;
  }
  fs::create_directories(out_dir);

  struct Outcome {
    bool ok = false;
    std::string error;
    Route route = Route::Fallback;
    ChannelId channel = ChannelId::R;
    double predicted = 0.0;
  };
  std::vector<Outcome> outcomes(files.size());
  std::mutex log_mutex;
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    Outcome& oc = outcomes[i];
    try {
      const RasterImage rgb = load_rgb(files[i].string());
      const PipelineResult res = segment_image(rgb, models, cfg);
      const fs::path out =
          fs::path(out_dir) / (files[i].stem().string() + "_segmentation.png");
      save_mask_png(res.mask, out.string());
      oc.ok = true;
      oc.route = res.route;
      oc.channel = res.chosen_channel;
      oc.predicted = res.predicted_jaccard;
    } catch (const std::exception& e) {
      oc.error = e.what();
      std::lock_guard lock(log_mutex);
      std::cerr << files[i].string() << ": " << e.what() << "\n";
    }
  });

  json manifest;
  manifest["images"] = json::array();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Outcome& oc = outcomes[i];
    if (!oc.ok) {
      ++failures;
      manifest["images"].push_back(
          {{"id", files[i].stem().string()}, {"error", oc.error}});
      continue;
    }
    manifest["images"].push_back(
        {{"id", files[i].stem().string()},
         {"route", to_string(oc.route)},
         {"chosen_channel", to_string(oc.channel)},
         {"predicted_jaccard", oc.predicted}});
  }
  write_text_file((fs::path(out_dir) / "run_manifest.json").string(),
                  manifest.dump(2) + "\n");
  std::cout << "segmented " << files.size() - failures << "/" << files.size()
            << " images\n";
  return failures == 0 ? 0 : 1;
}

int cmd_features(const std::string& input_dir, const std::string& truth_dir,
                 const std::string& out_csv, const std::string& config_path,
                 int jobs) {
  const PipelineConfig cfg = config_from(config_path);
  const auto files = list_images(input_dir);
  std::vector<std::vector<TrainingRow>> per_image(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    const std::string stem = files[i].stem().string();
    const fs::path truth = fs::path(truth_dir) / (stem + "_segmentation.png");
    try {
      if (!fs::exists(truth))
        throw std::runtime_error("no truth mask: " + truth.string());
      per_image[i] = build_training_rows(stem, load_rgb(files[i].string()),
                                         load_mask(truth.string()), cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::vector<TrainingRow> rows;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      ++failures;
      std::cerr << files[i].string() << ": " << errors[i] << "\n";
      continue;
    }
    rows.insert(rows.end(), per_image[i].begin(), per_image[i].end());
  }
  write_text_file(out_csv, feature_csv(rows));
  std::cout << "wrote " << rows.size() << " feature rows for "
            << files.size() - failures << "/" << files.size() << " images\n";
  return failures == 0 ? 0 : 1;
}

int cmd_train(const std::string& csv_path, const std::string& channel,
              const std::string& out_path, std::uint32_t seed) {
  const ChannelId ch = channel_from_string(channel);
  std::vector<TrainRow> rows;
  for (const auto& r : parse_feature_csv(read_text_file(csv_path)))
    if (r.channel == ch) rows.push_back({r.features, r.true_jaccard});
  TrainConfig tc;
  tc.seed = seed;
  TrainStats stats;
  const MlpModel model = train(ch, rows, tc, &stats);
  if (const fs::path parent = fs::path(out_path).parent_path();
      !parent.empty())
    fs::create_directories(parent);
  save_model_file(model, out_path);
  std::cout << "channel " << channel << ": " << rows.size() << " rows, "
            << stats.epochs << " epochs, train MSE " << stats.train_mse
            << ", validation MSE " << stats.val_mse << "\n";
  return 0;
}

int cmd_eval(const std::string& pred_dir, const std::string& truth_dir,
             const std::string& report_path) {
  std::map<std::string, std::pair<std::string, double>> routes;
  std::map<std::string, std::string> channels;
  const fs::path manifest = fs::path(pred_dir) / "run_manifest.json";
  if (fs::exists(manifest)) {
    const json doc = json::parse(read_text_file(manifest.string()));
    for (const auto& e : doc.value("images", json::array())) {
      if (!e.contains("route")) continue;
      const std::string id = e.value("id", "");
      routes[id] = {e.value("route", "unknown"),
                    e.value("predicted_jaccard", 0.0)};
      channels[id] = e.value("chosen_channel", "");
    }
  }

  std::vector<EvalRow> rows;
  std::size_t failures = 0;
  std::vector<fs::path> preds;
  for (const auto& e : fs::directory_iterator(pred_dir))
    if (e.is_regular_file() && is_image_file(e.path()) &&
        is_truth_file(e.path()))
      preds.push_back(e.path());
  std::sort(preds.begin(), preds.end());
  for (const auto& p : preds) {
    const std::string name = p.filename().string();
    std::string id = p.stem().string();
    id.erase(id.size() - std::string("_segmentation").size());
    const fs::path truth = fs::path(truth_dir) / name;
    try {
      if (!fs::exists(truth))
        throw std::runtime_error("no truth mask: " + truth.string());
      EvalRow row;
      row.id = id;
      row.jaccard = jaccard(load_mask(p.string()), load_mask(truth.string()));
      if (auto it = routes.find(id); it != routes.end()) {
        row.route = it->second.first;
        row.predicted_jaccard = it->second.second;
        row.chosen_channel = channels[id];
      }
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << p.string() << ": " << e.what() << "\n";
    }
  }

  const EvalReport report = make_eval_report(std::move(rows));
  write_text_file(report_path, eval_report_json(report));
  write_text_file(report_path + ".txt", eval_report_table(report));
  std::cout << eval_report_table(report);
  return failures == 0 ? 0 : 1;
}

int cmd_experiments(const std::string& input_dir, const std::string& truth_dir,
                    const std::string& recipes_path,
                    const std::string& report_path,
                    const std::string& config_path) {
  const PipelineConfig cfg = config_from(config_path);
  std::vector<Recipe> recipes =
      recipes_path.empty()
          ? table_recipes(cfg.recipe_params)
          : parse_recipes_json(read_text_file(recipes_path),
                               cfg.recipe_params);

  std::vector<std::pair<RasterImage, BinaryMask>> corpus;
  for (const auto& p : list_images(input_dir)) {
    const fs::path truth =
        fs::path(truth_dir) / (p.stem().string() + "_segmentation.png");
    if (!fs::exists(truth)) {
      std::cerr << p.string() << ": no truth mask, skipped\n";
      continue;
    }
    corpus.emplace_back(load_rgb(p.string()), load_mask(truth.string()));
  }
  const ExperimentReport report = run_experiments(corpus, recipes, cfg);
  write_text_file(report_path, experiment_report_json(report));
  write_text_file(report_path + ".txt", experiment_report_table(report));
  std::cout << experiment_report_table(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dermoscopy lesion segmentation toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string models_dir, out_path, config_path, truth_dir, channel,
      recipes_path, report_path;
  int jobs = 1;
  std::uint32_t seed = 1;

  auto* seg = app.add_subcommand("segment", "segment images to lesion masks");
  seg->add_option("--input", inputs, "input image files or directories")
      ->required();
  seg->add_option("--models", models_dir, "directory with mlp_<channel>.json")
      ->required();
  seg->add_option("--out", out_path, "output directory")->required();
  seg->add_option("--config", config_path, "pipeline config JSON");
  seg->add_option("--jobs", jobs, "worker threads");

  auto* feat = app.add_subcommand("features",
                                  "extract per-channel training features");
  feat->add_option("--input", inputs, "image directory")->required();
  feat->add_option("--truth", truth_dir, "ground-truth mask directory")
      ->required();
  feat->add_option("--out", out_path, "output CSV path")->required();
  feat->add_option("--config", config_path, "pipeline config JSON");
  feat->add_option("--jobs", jobs, "worker threads");

  auto* tr = app.add_subcommand("train", "train one channel predictor");
  tr->add_option("--input", inputs, "feature CSV")->required();
  tr->add_option("--channel", channel, "channel id (R..B1)")->required();
  tr->add_option("--out", out_path, "output model JSON")->required();
  tr->add_option("--seed", seed, "training seed");

  auto* ev = app.add_subcommand("eval", "score predicted masks against truth");
  ev->add_option("--input", inputs, "predicted mask directory")->required();
  ev->add_option("--truth", truth_dir, "ground-truth mask directory")
      ->required();
  ev->add_option("--report", report_path, "report JSON path")->required();

  auto* ex = app.add_subcommand("experiments",
                                "rank preprocessing recipes on a corpus");
  ex->add_option("--input", inputs, "image directory")->required();
  ex->add_option("--truth", truth_dir, "ground-truth mask directory")
      ->required();
  ex->add_option("--recipes", recipes_path,
                 "recipe JSON (defaults to the built-in ten)");
  ex->add_option("--report", report_path, "report JSON path")->required();
  ex->add_option("--config", config_path, "pipeline config JSON");

  SynthSpec synth_spec;
  auto* sy = app.add_subcommand("synth", "generate a synthetic test corpus");
  sy->add_option("--out", out_path, "output directory")->required();
  sy->add_option("--seed", synth_spec.seed, "corpus seed");
  sy->add_option("--count", synth_spec.count, "number of images");
  sy->add_option("--size", synth_spec.width, "image side length");
  sy->add_option("--artifact-frac", synth_spec.artifact_fraction,
                 "fraction of images with artifacts");
  sy->add_option("--noise", synth_spec.noise_sigma, "noise sigma");

  CLI11_PARSE(app, argc, argv);

  try {
    if (seg->parsed())
      return cmd_segment(inputs, models_dir, out_path, config_path, jobs);
    if (feat->parsed())
      return cmd_features(inputs.at(0), truth_dir, out_path, config_path,
                          jobs);
    if (tr->parsed()) return cmd_train(inputs.at(0), channel, out_path, seed);
    if (ev->parsed()) return cmd_eval(inputs.at(0), truth_dir, report_path);
    if (ex->parsed())
      return cmd_experiments(inputs.at(0), truth_dir, recipes_path,
                             report_path, config_path);
    if (sy->parsed()) {
      synth_spec.height = synth_spec.width;
      write_synth_corpus(synth_spec, out_path);
      std::cout << "wrote " << synth_spec.count << " images to " << out_path
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

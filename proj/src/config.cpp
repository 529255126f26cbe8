#include "lesionseg/config.hpp"

#include <fstream>

#include <json.hpp>

namespace lesionseg {

namespace {

using json = nlohmann::json;

[[noreturn]] void unknown_key(const std::string& path) {
  throw std::runtime_error("config: unknown key '" + path + "'");
}

class Group {
 public:
  Group(const json& j, std::string prefix)
      : j_(j), prefix_(std::move(prefix)) {
    if (!j.is_object())
      throw std::runtime_error("config: '" + prefix_ + "' must be an object");
  }
  ~Group() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw std::runtime_error("config: bad value type at '" + prefix_ + key +
                               "'");
    }
  }

  void get(const char* key, std::string& out) { get<std::string>(key, out); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        unknown_key(prefix_ + it.key());
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

}  // namespace

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Minority: return "minority";
    case Polarity::Dark: return "dark";
    case Polarity::Bright: return "bright";
  }
  return "?";
}

Polarity polarity_from_string(const std::string& s) {
  if (s == "minority") return Polarity::Minority;
  if (s == "dark") return Polarity::Dark;
  if (s == "bright") return Polarity::Bright;
  throw std::runtime_error("config: segment.polarity must be one of "
                           "minority|dark|bright, got '" + s + "'");
}

PipelineConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: parse error: ") + e.what());
  }
  if (!root.is_object())
    throw std::runtime_error("config: top level must be an object");

  PipelineConfig cfg;
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& section = it.key();
    if (section == "pipeline") {
      Group g(*it, "pipeline.");
      g.get("working_size", cfg.working_size);
      g.get("decision_threshold", cfg.decision_threshold);
      g.finish();
    } else if (section == "artifacts") {
      Group g(*it, "artifacts.");
      g.get("dark_thresh", cfg.artifacts.dark_thresh);
      g.get("min_band_cols", cfg.artifacts.min_band_cols);
      g.get("circle_min_circularity", cfg.artifacts.circle_min_circularity);
      g.get("circle_min_area_frac", cfg.artifacts.circle_min_area_frac);
      g.get("circle_max_area_frac", cfg.artifacts.circle_max_area_frac);
      g.get("circle_border_ring", cfg.artifacts.circle_border_ring);
      g.finish();
    } else if (section == "preprocess") {
      Group g(*it, "preprocess.");
      g.get("diffusion_iterations", cfg.recipe_params.diffusion.iterations);
      g.get("diffusion_kappa", cfg.recipe_params.diffusion.kappa);
      g.get("diffusion_lambda", cfg.recipe_params.diffusion.lambda);
      g.get("contrast_low_clip", cfg.recipe_params.contrast_low_clip);
      g.get("contrast_high_clip", cfg.recipe_params.contrast_high_clip);
      g.get("gamma", cfg.recipe_params.gamma);
      g.finish();
    } else if (section == "segment") {
      Group g(*it, "segment.");
      g.get("min_area_frac", cfg.min_area_frac);
      g.get("min_extent", cfg.min_extent);
      g.get("min_solidity", cfg.min_solidity);
      g.get("open_close_radius", cfg.open_close_radius);
      std::string pol = to_string(cfg.polarity);
      g.get("polarity", pol);
      cfg.polarity = polarity_from_string(pol);
      g.finish();
    } else {
      unknown_key(section);
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<Recipe> parse_recipes_json(const std::string& text,
                                       const RecipeParams& params) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("recipes: parse error: ") + e.what());
  }
  if (!root.is_array())
    throw std::runtime_error("recipes: top level must be an array");
  std::vector<Recipe> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& r = root[i];
    const std::string where = "recipes[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("id") || !r.contains("channel") ||
        !r.contains("steps"))
      throw std::runtime_error(where + ": need id, channel and steps");
    std::vector<RecipeStep> steps;
    for (const json& s : r.at("steps")) {
      if (!s.is_string())
        throw std::runtime_error(where + ".steps: entries must be strings");
      steps.push_back(recipe_step_from_string(s.get<std::string>()));
    }
    out.emplace_back(r.at("id").get<std::string>(),
                     channel_from_string(r.at("channel").get<std::string>()),
                     std::move(steps), params);
  }
  return out;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace lesionseg

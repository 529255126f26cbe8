#pragma once

#include <string>

#include "lesionseg/pipeline.hpp"

namespace lesionseg {

// JSON config with namespaced groups {pipeline, artifacts, preprocess,
// segment}. Unknown keys are rejected with their full path.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config_file(const std::string& path);

std::string to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);

// Recipe file: JSON array of {"id", "channel", "steps": [...]} objects.
// Operator parameters come from the supplied RecipeParams.
std::vector<Recipe> parse_recipes_json(const std::string& text,
                                       const RecipeParams& params);

}  // namespace lesionseg

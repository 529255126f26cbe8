#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lesionseg/mask.hpp"
#include "lesionseg/pipeline.hpp"

namespace lesionseg {

struct EvalRow {
  std::string id;
  double jaccard = 0.0;
  std::string route = "unknown";
  std::string chosen_channel;
  double predicted_jaccard = 0.0;
};

struct RouteAggregate {
  std::string route;
  std::size_t count = 0;
  double mean_jaccard = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_jaccard = 0.0;
  std::size_t count_above_08 = 0;
  std::vector<RouteAggregate> per_route;
};

// Aggregates recomputed from the rows.
EvalReport make_eval_report(std::vector<EvalRow> rows);

std::string eval_report_json(const EvalReport& r);
std::string eval_report_table(const EvalReport& r);

struct ExperimentEntry {
  std::string recipe_id;
  int operator_count = 0;
  double mean_jaccard = 0.0;
  std::size_t count_above_08 = 0;
  std::size_t best_count = 0;
};

struct ExperimentReport {
  std::vector<ExperimentEntry> entries;  // sorted by mean Jaccard, descending
  std::size_t corpus_size = 0;
  bool has_ties = false;  // per-image best credited to every tied recipe
};

// Runs preprocess -> Otsu -> filter -> select for every recipe over the
// corpus (no neural routing) and scores against the truths.
ExperimentReport run_experiments(
    const std::vector<std::pair<RasterImage, BinaryMask>>& corpus,
    const std::vector<Recipe>& recipes, const PipelineConfig& cfg);

std::string experiment_report_json(const ExperimentReport& r);
std::string experiment_report_table(const ExperimentReport& r);

// Feature CSV: header image_id,channel,f1..f13,jaccard (13 feature columns).
std::string feature_csv(const std::vector<TrainingRow>& rows);
std::vector<TrainingRow> parse_feature_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace lesionseg

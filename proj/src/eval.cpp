#include "lesionseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace lesionseg {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EvalReport make_eval_report(std::vector<EvalRow> rows) {
  EvalReport r;
  r.rows = std::move(rows);
  std::map<std::string, std::pair<std::size_t, double>> routes;
  double sum = 0.0;
  for (const auto& row : r.rows) {
    sum += row.jaccard;
    if (row.jaccard > 0.8) ++r.count_above_08;
    auto& agg = routes[row.route];
    ++agg.first;
    agg.second += row.jaccard;
  }
  r.mean_jaccard = r.rows.empty() ? 0.0 : sum / r.rows.size();
  for (const auto& [route, agg] : routes)
    r.per_route.push_back({route, agg.first, agg.second / agg.first});
  return r;
}

std::string eval_report_json(const EvalReport& r) {
  json doc;
  doc["aggregates"]["images"] = r.rows.size();
  doc["aggregates"]["mean_jaccard"] = r.mean_jaccard;
  doc["aggregates"]["count_jaccard_above_0.8"] = r.count_above_08;
  json routes = json::array();
  for (const auto& a : r.per_route)
    routes.push_back({{"route", a.route},
                      {"count", a.count},
                      {"mean_jaccard", a.mean_jaccard}});
  doc["aggregates"]["per_route"] = std::move(routes);
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"id", row.id},
                    {"jaccard", row.jaccard},
                    {"route", row.route},
                    {"chosen_channel", row.chosen_channel},
                    {"predicted_jaccard", row.predicted_jaccard}});
  doc["per_image"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string eval_report_table(const EvalReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %8s %10s %8s %10s\n", "image",
                "jaccard", "route", "channel", "predicted");
  out << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof(line), "%-28s %8.4f %10s %8s %10.4f\n",
                  row.id.c_str(), row.jaccard, row.route.c_str(),
                  row.chosen_channel.c_str(), row.predicted_jaccard);
    out << line;
  }
  out << "\n";
  std::snprintf(line, sizeof(line), "images: %zu  mean Jaccard: %.4f  J>0.8: %zu\n",
                r.rows.size(), r.mean_jaccard, r.count_above_08);
  out << line;
  for (const auto& a : r.per_route) {
    std::snprintf(line, sizeof(line), "route %-9s count: %4zu  mean Jaccard: %.4f\n",
                  a.route.c_str(), a.count, a.mean_jaccard);
    out << line;
  }
  return out.str();
}

ExperimentReport run_experiments(
    const std::vector<std::pair<RasterImage, BinaryMask>>& corpus,
    const std::vector<Recipe>& recipes, const PipelineConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.corpus_size = corpus.size();
  const std::size_t nr = recipes.size();
  std::vector<std::vector<double>> scores(nr,
                                          std::vector<double>(corpus.size()));

  for (std::size_t ii = 0; ii < corpus.size(); ++ii) {
    const auto& [rgb, truth] = corpus[ii];
    const WorkingFrame frame = prepare_frame(rgb, cfg);
    const BinaryMask truth_work =
        resize_mask_nearest(truth, cfg.working_size, cfg.working_size);
    for (std::size_t ri = 0; ri < nr; ++ri) {
      ChannelSegmentation seg =
          segment_channel(frame.rgb, recipes[ri], frame.field, cfg, false);
      scores[ri][ii] =
          seg.ok ? jaccard(seg.mask, truth_work) : 0.0;  // no candidate
    }
  }

  for (std::size_t ri = 0; ri < nr; ++ri) {
    ExperimentEntry e;
    e.recipe_id = recipes[ri].id();
    e.operator_count = recipes[ri].operator_count();
    double sum = 0.0;
    for (double s : scores[ri]) {
      sum += s;
      if (s > 0.8) ++e.count_above_08;
    }
    e.mean_jaccard = corpus.empty() ? 0.0 : sum / corpus.size();
    report.entries.push_back(std::move(e));
  }

  for (std::size_t ii = 0; ii < corpus.size(); ++ii) {
    double best = 0.0;
    for (std::size_t ri = 0; ri < nr; ++ri)
      best = std::max(best, scores[ri][ii]);
    std::size_t winners = 0;
    for (std::size_t ri = 0; ri < nr; ++ri)
      if (scores[ri][ii] == best) {
        ++report.entries[ri].best_count;
        ++winners;
      }
    if (winners > 1) report.has_ties = true;
  }

  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const ExperimentEntry& a, const ExperimentEntry& b) {
                     return a.mean_jaccard > b.mean_jaccard;
                   });
  return report;
}

std::string experiment_report_json(const ExperimentReport& r) {
  json doc;
  doc["corpus_size"] = r.corpus_size;
  doc["ties"] = r.has_ties;
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"recipe", e.recipe_id},
                       {"operators", e.operator_count},
                       {"mean_jaccard", e.mean_jaccard},
                       {"count_jaccard_above_0.8", e.count_above_08},
                       {"best_count", e.best_count}});
  doc["ranking"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::string experiment_report_table(const ExperimentReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-20s %5s %12s %8s %6s\n", "recipe",
                "ops", "mean J", "J>0.8", "best");
  out << line;
  for (const auto& e : r.entries) {
    std::snprintf(line, sizeof(line), "%-20s %5d %12.4f %8zu %6zu\n",
                  e.recipe_id.c_str(), e.operator_count, e.mean_jaccard,
                  e.count_above_08, e.best_count);
    out << line;
  }
  if (r.has_ties) out << "note: tied best segmentations credited to all\n";
  return out.str();
}

std::string feature_csv(const std::vector<TrainingRow>& rows) {
  std::ostringstream out;
  out << "image_id,channel";
  for (int i = 1; i <= kNumFeatures; ++i) out << ",f" << i;
  out << ",jaccard\n";
  for (const auto& row : rows) {
    out << row.image_id << ',' << to_string(row.channel);
    for (double v : row.features.as_array()) out << ',' << fmt(v);
    out << ',' << fmt(row.true_jaccard) << '\n';
  }
  return out.str();
}

std::vector<TrainingRow> parse_feature_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("feature csv: empty file");
  std::vector<TrainingRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 2 + kNumFeatures + 1)
      throw std::runtime_error("feature csv: line " + std::to_string(lineno) +
                               ": expected " +
                               std::to_string(2 + kNumFeatures + 1) +
                               " columns, got " + std::to_string(cells.size()));
    TrainingRow row;
    row.image_id = cells[0];
    row.channel = channel_from_string(cells[1]);
    std::array<double, kNumFeatures> f{};
    try {
      for (int i = 0; i < kNumFeatures; ++i) f[i] = std::stod(cells[2 + i]);
      row.true_jaccard = std::stod(cells[2 + kNumFeatures]);
    } catch (const std::exception&) {
      throw std::runtime_error("feature csv: line " + std::to_string(lineno) +
                               ": bad number");
    }
    row.features = FeatureVector::from_array(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lesionseg

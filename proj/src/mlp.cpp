#include "lesionseg/mlp.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace lesionseg {

namespace {

using json = nlohmann::json;

std::array<double, kNumFeatures> scale_input(const MlpModel& m,
                                             const FeatureVector& x) {
  const auto raw = x.as_array();
  std::array<double, kNumFeatures> out;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (!std::isfinite(raw[i]))
      throw std::invalid_argument("mlp forward: non-finite feature input");
    const double t = 2.0 * (raw[i] - m.in_lo[i]) / (m.in_hi[i] - m.in_lo[i]) -
                     1.0;
    out[i] = std::clamp(t, -1.0, 1.0);
  }
  return out;
}

double eval_raw(const MlpModel& m, const std::array<double, kNumFeatures>& x,
                std::array<double, kHiddenUnits>* hidden = nullptr) {
  double y = m.b2;
  for (int j = 0; j < kHiddenUnits; ++j) {
    double a = m.b1[j];
    for (int i = 0; i < kNumFeatures; ++i) a += m.w1[j][i] * x[i];
    const double t = std::tanh(a);
    if (hidden) (*hidden)[j] = t;
    y += m.w2[j] * t;
  }
  return y;
}

// deterministic uniform in [0,1) independent of libstdc++ distribution
// internals
double urand(std::mt19937& rng) {
  const std::uint64_t hi = rng(), lo = rng();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

}  // namespace

void MlpModel::validate() const {
  auto check = [](double v) {
    if (!std::isfinite(v))
      throw std::invalid_argument("MlpModel: non-finite weight");
  };
  for (int i = 0; i < kNumFeatures; ++i) {
    check(in_lo[i]);
    check(in_hi[i]);
    if (!(in_hi[i] > in_lo[i]))
      throw std::invalid_argument(
          "MlpModel: in_hi must exceed in_lo elementwise");
  }
  for (int j = 0; j < kHiddenUnits; ++j) {
    check(b1[j]);
    check(w2[j]);
    for (int i = 0; i < kNumFeatures; ++i) check(w1[j][i]);
  }
  check(b2);
}

double forward_raw(const MlpModel& m, const FeatureVector& x) {
  return eval_raw(m, scale_input(m, x));
}

double forward(const MlpModel& m, const FeatureVector& x) {
  return std::clamp(forward_raw(m, x), 0.0, 1.0);
}

double batch_mse(const MlpModel& m, const std::vector<TrainRow>& batch) {
  if (batch.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& row : batch) {
    const double e = forward_raw(m, row.features) - row.target;
    sum += e * e;
  }
  return sum / static_cast<double>(batch.size());
}

MlpGradients gradient(const MlpModel& m, const std::vector<TrainRow>& batch) {
  MlpGradients g;
  if (batch.empty()) return g;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  std::array<double, kHiddenUnits> hidden;
  for (const auto& row : batch) {
    const auto x = scale_input(m, row.features);
    const double err = eval_raw(m, x, &hidden) - row.target;
    const double dy = 2.0 * err * inv_n;
    g.b2 += dy;
    for (int j = 0; j < kHiddenUnits; ++j) {
      g.w2[j] += dy * hidden[j];
      const double da = dy * m.w2[j] * (1.0 - hidden[j] * hidden[j]);
      g.b1[j] += da;
      for (int i = 0; i < kNumFeatures; ++i) g.w1[j][i] += da * x[i];
    }
  }
  return g;
}

namespace {

void axpy(MlpModel& m, const MlpGradients& g, double step) {
  for (int j = 0; j < kHiddenUnits; ++j) {
    m.b1[j] -= step * g.b1[j];
    m.w2[j] -= step * g.w2[j];
    for (int i = 0; i < kNumFeatures; ++i) m.w1[j][i] -= step * g.w1[j][i];
  }
  m.b2 -= step * g.b2;
}

}  // namespace

MlpModel train(ChannelId channel, const std::vector<TrainRow>& rows,
               const TrainConfig& cfg, TrainStats* stats) {
  if (static_cast<int>(rows.size()) < cfg.min_rows)
    throw std::invalid_argument("mlp train: need at least " +
                                std::to_string(cfg.min_rows) + " rows, got " +
                                std::to_string(rows.size()));
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0))
    throw std::invalid_argument("mlp train: val_fraction must be in (0,1)");
  for (const auto& r : rows)
    if (!(r.target >= 0.0 && r.target <= 1.0))
      throw std::invalid_argument("mlp train: targets must be in [0,1]");

  std::mt19937 rng(cfg.seed);

  // split
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j =
        static_cast<std::size_t>(urand(rng) * static_cast<double>(i + 1));
    std::swap(order[i], order[std::min(j, i)]);
  }
  std::size_t n_val = static_cast<std::size_t>(
      std::lround(cfg.val_fraction * static_cast<double>(rows.size())));
  n_val = std::max<std::size_t>(1, std::min(n_val, rows.size() - 1));
  std::vector<TrainRow> val, tr;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_val ? val : tr).push_back(rows[order[i]]);

  MlpModel m;
  m.channel = channel;
  for (int i = 0; i < kNumFeatures; ++i) {
    double lo = rows[0].features.as_array()[i], hi = lo;
    for (const auto& r : rows) {
      const double v = r.features.as_array()[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;  // constant feature, avoid div by 0
    m.in_lo[i] = lo;
    m.in_hi[i] = hi;
  }
  const double w1_scale = std::sqrt(6.0 / (kNumFeatures + kHiddenUnits));
  const double w2_scale = std::sqrt(6.0 / (kHiddenUnits + 1));
  for (int j = 0; j < kHiddenUnits; ++j) {
    for (int i = 0; i < kNumFeatures; ++i)
      m.w1[j][i] = (2.0 * urand(rng) - 1.0) * w1_scale;
    m.b1[j] = 0.0;
    m.w2[j] = (2.0 * urand(rng) - 1.0) * w2_scale;
  }
  // start the output bias at the training-target mean
  double mean_t = 0.0;
  for (const auto& r : tr) mean_t += r.target;
  m.b2 = mean_t / static_cast<double>(tr.size());

  MlpModel best = m;
  double best_val = batch_mse(m, val);
  double cur_loss = batch_mse(m, tr);
  double lr = cfg.initial_lr;
  int stale = 0;
  int epoch = 0;
  for (; epoch < cfg.max_epochs; ++epoch) {
    const MlpGradients g = gradient(m, tr);
    MlpModel cand;
    double cand_loss = cur_loss;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      cand = m;
      axpy(cand, g, lr);
      cand_loss = batch_mse(cand, tr);
      if (cand_loss <= cur_loss) {
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;  // gradient step no longer reduces the loss
    m = cand;
    cur_loss = cand_loss;
    lr *= 1.2;

    const double v = batch_mse(m, val);
    if (v < best_val - 1e-15) {
      best_val = v;
      best = m;
      stale = 0;
    } else if (++stale > cfg.patience) {
      break;
    }
  }

  if (stats) {
    stats->epochs = epoch;
    stats->train_mse = batch_mse(best, tr);
    stats->val_mse = best_val;
  }
  best.validate();
  return best;
}

std::string save_model(const MlpModel& m) {
  json doc;
  doc["schema"] = "lesionseg-mlp/1";
  doc["channel"] = to_string(m.channel);
  doc["in_lo"] = m.in_lo;
  doc["in_hi"] = m.in_hi;
  json w1 = json::array();
  for (const auto& row : m.w1) w1.push_back(row);
  doc["W1"] = std::move(w1);
  doc["b1"] = m.b1;
  doc["W2"] = json::array({m.w2});
  doc["b2"] = m.b2;
  return doc.dump(2) + "\n";
}

namespace {

template <std::size_t N>
void read_vec(const json& j, const char* path, std::array<double, N>& out) {
  if (!j.is_array() || j.size() != N)
    throw std::runtime_error(std::string("model document: field ") + path +
                             " must be an array of " + std::to_string(N) +
                             " numbers");
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number())
      throw std::runtime_error(std::string("model document: field ") + path +
                               "[" + std::to_string(i) + "] is not a number");
    out[i] = j[i].get<double>();
  }
}

}  // namespace

MlpModel load_model(const std::string& doc) {
  json j;
  try {
    j = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model document: parse error: ") +
                             e.what());
  }
  if (!j.is_object()) throw std::runtime_error("model document: not an object");
  if (j.value("schema", "") != "lesionseg-mlp/1")
    throw std::runtime_error("model document: field schema: expected "
                             "\"lesionseg-mlp/1\"");
  MlpModel m;
  try {
    if (!j.contains("channel") || !j["channel"].is_string())
      throw std::runtime_error("model document: field channel missing");
    m.channel = channel_from_string(j["channel"].get<std::string>());
    read_vec(j.at("in_lo"), "in_lo", m.in_lo);
    read_vec(j.at("in_hi"), "in_hi", m.in_hi);
    const json& w1 = j.at("W1");
    if (!w1.is_array() || w1.size() != kHiddenUnits)
      throw std::runtime_error(
          "model document: field W1 must have " +
          std::to_string(kHiddenUnits) + " rows, got " +
          std::to_string(w1.is_array() ? w1.size() : 0));
    for (int r = 0; r < kHiddenUnits; ++r)
      read_vec(w1[r], ("W1[" + std::to_string(r) + "]").c_str(), m.w1[r]);
    read_vec(j.at("b1"), "b1", m.b1);
    const json& w2 = j.at("W2");
    if (!w2.is_array() || w2.size() != 1)
      throw std::runtime_error("model document: field W2 must have 1 row");
    read_vec(w2[0], "W2[0]", m.w2);
    if (!j.contains("b2") || !j["b2"].is_number())
      throw std::runtime_error("model document: field b2 missing");
    m.b2 = j["b2"].get<double>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model document: ") + e.what());
  }
  m.validate();
  return m;
}

void save_model_file(const MlpModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << save_model(m);
}

MlpModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  std::string doc((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  try {
    return load_model(doc);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace lesionseg

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lesionseg/features.hpp"
#include "lesionseg/image.hpp"

namespace lesionseg {

inline constexpr int kHiddenUnits = 20;

// 13 -> 20 (tanh) -> 1 (linear) regression network with min-max input
// scaling to [-1,1]. Inference output is clamped to [0,1]; training and
// gradients use the raw linear output.
struct MlpModel {
  ChannelId channel = ChannelId::R;
  std::array<double, kNumFeatures> in_lo{};
  std::array<double, kNumFeatures> in_hi{};
  std::array<std::array<double, kNumFeatures>, kHiddenUnits> w1{};
  std::array<double, kHiddenUnits> b1{};
  std::array<double, kHiddenUnits> w2{};
  double b2 = 0.0;

  void validate() const;  // finite weights, in_hi > in_lo
};

struct TrainRow {
  FeatureVector features;
  double target = 0.0;  // true Jaccard of the candidate segmentation
};

struct TrainConfig {
  std::uint32_t seed = 1;
  int max_epochs = 2000;
  double initial_lr = 0.5;
  double val_fraction = 0.15;
  int patience = 6;
  int min_rows = 30;
};

struct TrainStats {
  int epochs = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

// Predicted Jaccard in [0,1].
double forward(const MlpModel& m, const FeatureVector& x);

// Linear (unclamped) output, used by the loss and its gradient.
double forward_raw(const MlpModel& m, const FeatureVector& x);

double batch_mse(const MlpModel& m, const std::vector<TrainRow>& batch);

struct MlpGradients {
  std::array<std::array<double, kNumFeatures>, kHiddenUnits> w1{};
  std::array<double, kHiddenUnits> b1{};
  std::array<double, kHiddenUnits> w2{};
  double b2 = 0.0;
};

// Analytic gradient of batch_mse.
MlpGradients gradient(const MlpModel& m, const std::vector<TrainRow>& batch);

// Deterministic full-batch gradient descent with backtracking step halving;
// keeps the weights of the best validation epoch.
MlpModel train(ChannelId channel, const std::vector<TrainRow>& rows,
               const TrainConfig& cfg, TrainStats* stats = nullptr);

// JSON model document, schema "lesionseg-mlp/1".
std::string save_model(const MlpModel& m);
MlpModel load_model(const std::string& doc);

void save_model_file(const MlpModel& m, const std::string& path);
MlpModel load_model_file(const std::string& path);

}  // namespace lesionseg

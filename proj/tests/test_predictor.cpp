#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lesionseg/mlp.hpp"

using namespace lesionseg;

namespace {

MlpModel unit_scaled_model() {
  MlpModel m;
  m.in_lo.fill(0.0);
  m.in_hi.fill(1.0);
  return m;
}

FeatureVector random_features(std::mt19937& rng) {
  std::uniform_real_distribution<> uni(0, 1);
  std::array<double, kNumFeatures> a;
  for (double& v : a) v = uni(rng);
  return FeatureVector::from_array(a);
}

MlpModel random_model(std::mt19937& rng) {
  std::normal_distribution<> nrm(0, 0.7);
  MlpModel m = unit_scaled_model();
  for (auto& row : m.w1)
    for (double& v : row) v = nrm(rng);
  for (double& v : m.b1) v = nrm(rng);
  for (double& v : m.w2) v = nrm(rng);
  m.b2 = nrm(rng);
  return m;
}

// independent re-evaluation of the network, written as plain matrix math
double oracle_forward_raw(const MlpModel& m, const FeatureVector& x) {
  const auto a = x.as_array();
  double out = m.b2;
  for (int h = 0; h < kHiddenUnits; ++h) {
    double z = m.b1[h];
    for (int i = 0; i < kNumFeatures; ++i) {
      const double scaled =
          -1.0 + 2.0 * (a[i] - m.in_lo[i]) / (m.in_hi[i] - m.in_lo[i]);
      z += m.w1[h][i] * scaled;
    }
    out += m.w2[h] * std::tanh(z);
  }
  return out;
}

std::vector<TrainRow> synthetic_rows(int n, std::uint32_t seed, double noise) {
  // target = clamp(1 - f5) + U(-noise, noise): learnable from one input
  std::mt19937 rng(seed);
  std::uniform_real_distribution<> uni(0, 1);
  std::uniform_real_distribution<> jitter(-noise, noise);
  std::vector<TrainRow> rows(n);
  for (auto& r : rows) {
    r.features = random_features(rng);
    r.target = std::clamp(1.0 - r.features.center_distance + jitter(rng), 0.0,
                          1.0);
  }
  return rows;
}

}  // namespace

TEST_CASE("bias-only network returns its output bias") {
  MlpModel m = unit_scaled_model();
  m.b2 = 0.37;
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i)
    CHECK(forward(m, random_features(rng)) == doctest::Approx(0.37));
}

TEST_CASE("inference output is clamped to [0,1], raw output is not") {
  MlpModel m = unit_scaled_model();
  m.b2 = 1.7;
  const FeatureVector x{};
  CHECK(forward(m, x) == 1.0);
  CHECK(forward_raw(m, x) == doctest::Approx(1.7));
  m.b2 = -0.3;
  CHECK(forward(m, x) == 0.0);
}

TEST_CASE("forward matches an independent matrix evaluation") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const MlpModel m = random_model(rng);
    const FeatureVector x = random_features(rng);
    const double raw = forward_raw(m, x);
    CHECK(raw == doctest::Approx(oracle_forward_raw(m, x)).epsilon(1e-12));
    CHECK(forward(m, x) == std::clamp(raw, 0.0, 1.0));
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    MlpModel m = random_model(rng);
    std::vector<TrainRow> batch(8);
    std::uniform_real_distribution<> uni(0, 1);
    for (auto& r : batch) {
      r.features = random_features(rng);
      r.target = uni(rng);
    }
    const MlpGradients g = gradient(m, batch);
    const double eps = 1e-6;
    auto fd = [&](double& slot) {
      const double keep = slot;
      slot = keep + eps;
      const double hi = batch_mse(m, batch);
      slot = keep - eps;
      const double lo = batch_mse(m, batch);
      slot = keep;
      return (hi - lo) / (2 * eps);
    };
    // spot-check a spread of coordinates in every parameter block
    for (int h : {0, 7, kHiddenUnits - 1}) {
      for (int i : {0, 5, kNumFeatures - 1}) {
        const double want = fd(m.w1[h][i]);
        CHECK(g.w1[h][i] ==
              doctest::Approx(want).epsilon(1e-4).scale(1.0));
      }
      CHECK(g.b1[h] == doctest::Approx(fd(m.b1[h])).epsilon(1e-4).scale(1.0));
      CHECK(g.w2[h] == doctest::Approx(fd(m.w2[h])).epsilon(1e-4).scale(1.0));
    }
    CHECK(g.b2 == doctest::Approx(fd(m.b2)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("training rejects too few rows and bad config") {
  const auto rows = synthetic_rows(10, 1, 0.0);
  CHECK_THROWS_AS(train(ChannelId::R, rows, TrainConfig{}),
                  std::invalid_argument);
  TrainConfig bad;
  bad.val_fraction = 0.0;
  CHECK_THROWS_AS(train(ChannelId::R, synthetic_rows(100, 1, 0.0), bad),
                  std::invalid_argument);
}

TEST_CASE("training fits a constant target almost exactly") {
  std::vector<TrainRow> rows = synthetic_rows(100, 5, 0.0);
  for (auto& r : rows) r.target = 0.42;
  TrainStats stats;
  const MlpModel m = train(ChannelId::G, rows, TrainConfig{}, &stats);
  CHECK(stats.train_mse < 1e-4);
  std::mt19937 rng(11);
  CHECK(forward(m, random_features(rng)) == doctest::Approx(0.42).epsilon(0.02));
}

TEST_CASE("training learns a single-feature target") {
  const auto rows = synthetic_rows(500, 7, 0.02);
  TrainStats stats;
  TrainConfig cfg;
  cfg.seed = 7;
  const MlpModel m = train(ChannelId::V, rows, cfg, &stats);
  CHECK(stats.val_mse < 1e-3);
  // the fitted function tracks 1 - f5 on fresh inputs
  std::mt19937 rng(99);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const FeatureVector x = random_features(rng);
    const double want = std::clamp(1.0 - x.center_distance, 0.0, 1.0);
    worst = std::max(worst, std::abs(forward(m, x) - want));
  }
  CHECK(worst < 0.15);
}

TEST_CASE("training is deterministic per seed and differs across seeds") {
  const auto rows = synthetic_rows(120, 13, 0.01);
  TrainConfig cfg;
  cfg.seed = 42;
  const MlpModel a = train(ChannelId::Cb, rows, cfg);
  const MlpModel b = train(ChannelId::Cb, rows, cfg);
  CHECK(save_model(a) == save_model(b));  // byte-identical serialization
  cfg.seed = 43;
  const MlpModel c = train(ChannelId::Cb, rows, cfg);
  CHECK(save_model(a) != save_model(c));
}

TEST_CASE("model save/load round trip") {
  std::mt19937 rng(23);
  const MlpModel m = random_model(rng);
  const std::string doc = save_model(m);
  const MlpModel back = load_model(doc);
  CHECK(back.channel == m.channel);
  CHECK(back.w1 == m.w1);
  CHECK(back.b1 == m.b1);
  CHECK(back.w2 == m.w2);
  CHECK(back.b2 == m.b2);
  CHECK(back.in_lo == m.in_lo);
  CHECK(back.in_hi == m.in_hi);
  CHECK(save_model(back) == doc);
}

TEST_CASE("model loader rejects malformed documents") {
  CHECK_THROWS_AS(load_model("not json"), std::runtime_error);
  CHECK_THROWS_AS(load_model("{}"), std::runtime_error);
  CHECK_THROWS_AS(load_model(R"({"schema":"other/9"})"), std::runtime_error);
  std::mt19937 rng(31);
  std::string doc = save_model(random_model(rng));
  // corrupt the hidden width
  const auto pos = doc.find("\"W1\"");
  REQUIRE(pos != std::string::npos);
  std::string truncated = doc;
  truncated.replace(pos, 4, "\"WX\"");
  CHECK_THROWS_AS(load_model(truncated), std::runtime_error);
}

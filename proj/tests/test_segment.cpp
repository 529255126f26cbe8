#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lesionseg/morphology.hpp"
#include "lesionseg/otsu.hpp"
#include "lesionseg/regions.hpp"

using namespace lesionseg;

namespace {

// exhaustive between-class variance over all 255 cuts, O(256^2)
int otsu_bruteforce_cut(const Histogram& h) {
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k < 255; ++k) {
    double w0 = 0, w1 = 0, s0 = 0, s1 = 0;
    for (int b = 0; b <= k; ++b) {
      w0 += static_cast<double>(h[b]);
      s0 += static_cast<double>(b) * h[b];
    }
    for (int b = k + 1; b < 256; ++b) {
      w1 += static_cast<double>(h[b]);
      s1 += static_cast<double>(b) * h[b];
    }
    if (w0 == 0 || w1 == 0) continue;
    const double mu0 = s0 / w0, mu1 = s1 / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best) {
      best = var;
      best_k = k;
    }
  }
  return best_k;
}

BinaryMask random_mask(int w, int h, double density, std::mt19937& rng) {
  BinaryMask m(w, h);
  std::uniform_real_distribution<> uni(0, 1);
  for (auto& b : m.bits) b = uni(rng) < density;
  return m;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.bits.size(); ++i)
    if (a.bits[i] && !b.bits[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("otsu separates a bimodal plane") {
  RasterImage plane(100, 100, Colorspace::Gray);
  for (int i = 0; i < 10000; ++i) plane.planes[0][i] = i < 6000 ? 0.2 : 0.8;
  const double t = otsu_threshold(plane, FieldMask(100, 100));
  CHECK(t > 0.2);
  CHECK(t <= 0.8);
}

TEST_CASE("otsu rejects a constant plane") {
  const RasterImage plane(10, 10, Colorspace::Gray, 0.5);
  CHECK_THROWS_AS(otsu_threshold(plane, FieldMask(10, 10)), NoContrastError);
}

TEST_CASE("otsu ignores field-invalid pixels") {
  RasterImage plane(10, 10, Colorspace::Gray, 0.5);
  // only invalid pixels differ; valid region is constant
  FieldMask field(10, 10);
  for (int x = 0; x < 10; ++x) {
    plane.set(0, x, 0, 0.9);
    field.invalidate(x, 0, FieldReason::BlackFrame);
  }
  CHECK_THROWS_AS(otsu_threshold(plane, field), NoContrastError);
}

TEST_CASE("otsu equals the exhaustive oracle on random histograms") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    Histogram h{};
    std::uniform_int_distribution<int> nbins(2, 50);
    std::uniform_int_distribution<int> bin(0, 255);
    std::uniform_int_distribution<int> mass(1, 5000);
    const int k = nbins(rng);
    for (int i = 0; i < k; ++i) h[bin(rng)] += mass(rng);
    int nonzero = 0;
    for (auto c : h) nonzero += c > 0;
    if (nonzero < 2) {
      CHECK_THROWS_AS(otsu_from_histogram(h), NoContrastError);
      continue;
    }
    const double t = otsu_from_histogram(h);
    const int cut = otsu_bruteforce_cut(h);
    CHECK(t == (cut + 0.5) / 255.0);
  }
}

TEST_CASE("binarize_minority picks the smaller side") {
  RasterImage plane(10, 10, Colorspace::Gray);
  for (int i = 0; i < 100; ++i) plane.planes[0][i] = i < 30 ? 0.2 : 0.8;
  const FieldMask field(10, 10);
  const BinaryMask m = binarize_minority(plane, 0.5, field);
  CHECK(m.count() == 30);  // dark side is the minority
  CHECK(m.at(0, 0));

  // 50/50 split: the darker side wins the tie
  RasterImage half(10, 10, Colorspace::Gray);
  for (int i = 0; i < 100; ++i) half.planes[0][i] = i < 50 ? 0.2 : 0.8;
  const BinaryMask hm = binarize_minority(half, 0.5, field);
  CHECK(hm.count() == 50);
  CHECK(hm.at(0, 0));

  // invalid pixels on the lesion side are excluded
  FieldMask partial(10, 10);
  for (int x = 0; x < 10; ++x) partial.invalidate(x, 0, FieldReason::BlackFrame);
  const BinaryMask pm = binarize_minority(plane, 0.5, partial);
  CHECK(pm.count() == 20);

  // lesion never exceeds half the valid pixels
  std::mt19937 rng(77);
  std::uniform_real_distribution<> uni(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RasterImage p(20, 20, Colorspace::Gray);
    for (double& v : p.planes[0]) v = uni(rng);
    const BinaryMask b = binarize_minority(p, uni(rng), FieldMask(20, 20));
    CHECK(b.count() * 2 <= 400);
  }
}

TEST_CASE("binarize polarity overrides") {
  RasterImage plane(10, 1, Colorspace::Gray);
  for (int i = 0; i < 10; ++i) plane.planes[0][i] = i < 7 ? 0.2 : 0.8;
  const FieldMask field(10, 1);
  CHECK(binarize(plane, 0.5, field, Polarity::Dark).count() == 7);
  CHECK(binarize(plane, 0.5, field, Polarity::Bright).count() == 3);
  CHECK(binarize(plane, 0.5, field, Polarity::Minority).count() == 3);
}

TEST_CASE("connected_components geometry of a filled square") {
  BinaryMask m(32, 32);
  for (int y = 5; y < 15; ++y)
    for (int x = 8; x < 18; ++x) m.set(x, y, true);
  const auto cands = connected_components(m);
  REQUIRE(cands.size() == 1);
  const RegionCandidate& c = cands[0];
  CHECK(c.area == 100);
  CHECK(c.perimeter == 40.0);
  CHECK(c.hull_area == doctest::Approx(100.0));
  CHECK(c.bbox_w == 10);
  CHECK(c.bbox_h == 10);
  CHECK(c.cx == doctest::Approx(12.5));
  CHECK(c.cy == doctest::Approx(9.5));
  CHECK(c.extent() == doctest::Approx(1.0));
  CHECK(c.solidity() == doctest::Approx(1.0));
}

TEST_CASE("diagonal pixels form one 8-connected component") {
  BinaryMask m(4, 4);
  m.set(1, 1, true);
  m.set(2, 2, true);
  const auto cands = connected_components(m);
  CHECK(cands.size() == 1);
  CHECK(cands[0].area == 2);
}

TEST_CASE("empty mask yields no candidates") {
  CHECK(connected_components(BinaryMask(8, 8)).empty());
}

TEST_CASE("component area and centroid match brute-force enumeration") {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryMask m = random_mask(24, 24, 0.35, rng);
    const auto cands = connected_components(m);
    std::size_t total = 0;
    for (const auto& c : cands) {
      total += static_cast<std::size_t>(c.area);
      double sx = 0, sy = 0;
      for (std::uint32_t i : c.pixels) {
        sx += i % 24;
        sy += i / 24;
      }
      CHECK(c.cx == doctest::Approx(sx / c.area));
      CHECK(c.cy == doctest::Approx(sy / c.area));
    }
    CHECK(total == m.count());  // candidate areas partition the mask
  }
}

TEST_CASE("filter_candidates applies the three gates inclusively") {
  auto make = [](std::int64_t area, int bw, int bh, double hull) {
    RegionCandidate c;
    c.area = area;
    c.bbox_w = bw;
    c.bbox_h = bh;
    c.hull_area = hull;
    c.perimeter = 4;
    return c;
  };
  const double img_area = 500.0 * 500.0;  // limit 500 px
  // area 499 eliminated
  CHECK(filter_candidates({make(499, 23, 23, 499)}, img_area).empty());
  // extent 0.19 eliminated: area 500 in a 2632-cell bbox
  CHECK(filter_candidates({make(500, 47, 56, 500)}, img_area).empty());
  // solidity < 0.4 eliminated
  CHECK(filter_candidates({make(500, 30, 42, 1300.0)}, img_area).empty());
  // exact boundary values kept: area 500, extent 0.2, solidity 0.4
  CHECK(filter_candidates({make(500, 50, 50, 1250.0)}, img_area).size() == 1);
}

TEST_CASE("select_center picks the candidate closest to the image center") {
  RegionCandidate a, b;
  a.label = 0;
  a.cx = 100;
  a.cy = 100;
  a.area = 400;
  b.label = 1;
  b.cx = 150;
  b.cy = 150;
  b.area = 900;
  CHECK_FALSE(select_center({}, 200, 200).has_value());
  CHECK(select_center({a}, 200, 200)->label == 0);
  // (99.5, 99.5) is the center; a is closer
  CHECK(select_center({a, b}, 200, 200)->label == 0);
  // equal distances: the larger area wins
  RegionCandidate c = a, d = a;
  c.label = 0;
  c.cx = 80;
  c.cy = 99.5;
  c.area = 400;
  d.label = 1;
  d.cx = 119;
  d.cy = 99.5;
  d.area = 900;
  CHECK(select_center({c, d}, 200, 200)->label == 1);
}

TEST_CASE("morphology on simple shapes") {
  CHECK(open_close(BinaryMask(20, 20), 5).count() == 0);

  // a large solid square survives nearly unchanged: the disk rounds the four
  // corners, losing only a handful of pixels each
  BinaryMask sq(120, 120);
  for (int y = 10; y < 110; ++y)
    for (int x = 10; x < 110; ++x) sq.set(x, y, true);
  const BinaryMask sq_oc = open_close(sq, 5);
  CHECK(subset(sq_oc, sq));
  CHECK(sq.count() - sq_oc.count() < 4 * 25);

  // an isolated pixel far from the square is erased by the opening
  BinaryMask noisy = sq;
  noisy.set(115, 5, true);
  CHECK(open_close(noisy, 5) == sq_oc);
}

TEST_CASE("morphology laws on random masks") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const BinaryMask m = random_mask(40, 40, 0.5, rng);
    for (int radius : {1, 3}) {
      const BinaryMask opened = open_disk(m, radius);
      const BinaryMask closed = close_disk(m, radius);
      CHECK(subset(opened, m));
      CHECK(subset(m, closed));
      const BinaryMask oc = open_close(m, radius);
      CHECK(open_close(oc, radius) == oc);
    }
  }
}

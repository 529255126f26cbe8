#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lesionseg/colorspace.hpp"
#include "lesionseg/features.hpp"
#include "lesionseg/regions.hpp"

using namespace lesionseg;

namespace {

BinaryMask ellipse_mask(int n, double a, double b, double cx, double cy) {
  BinaryMask m(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double u = (x - cx) / a, v = (y - cy) / b;
      if (u * u + v * v <= 1.0) m.set(x, y, true);
    }
  return m;
}

RegionCandidate only_component(const BinaryMask& m) {
  const auto cands = connected_components(m);
  REQUIRE(cands.size() == 1);
  return cands[0];
}

}  // namespace

TEST_CASE("feature vector array round trip preserves order") {
  std::array<double, 13> a;
  for (int i = 0; i < 13; ++i) a[i] = i + 0.5;
  const FeatureVector f = FeatureVector::from_array(a);
  CHECK(f.extent == 0.5);
  CHECK(f.center_distance == 4.5);
  CHECK(f.cr_background == 12.5);
  CHECK(f.as_array() == a);
}

TEST_CASE("shape features of a 10x10 square") {
  BinaryMask m(32, 32);
  for (int y = 4; y < 14; ++y)
    for (int x = 6; x < 16; ++x) m.set(x, y, true);
  const ShapeFeatures s = shape_features(only_component(m));
  CHECK(s.extent == doctest::Approx(1.0));
  CHECK(s.solidity == doctest::Approx(1.0));
  CHECK(s.area_perimeter == doctest::Approx(100.0 / 40.0));
  CHECK(s.eccentricity == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("eccentricity of ellipses matches the closed form") {
  // e = sqrt(1 - (b/a)^2) for semi-axes a >= b
  const int n = 401;
  for (double ratio : {1.0, 2.0, 4.0}) {
    const double b = 40.0, a = b * ratio;
    const BinaryMask m = ellipse_mask(n, a, b, n / 2.0, n / 2.0);
    const ShapeFeatures s = shape_features(only_component(m));
    const double expected = std::sqrt(1.0 - 1.0 / (ratio * ratio));
    CHECK(s.eccentricity == doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("eccentricity is invariant under translation") {
  const BinaryMask m1 = ellipse_mask(301, 60, 25, 150, 150);
  const BinaryMask m2 = ellipse_mask(301, 60, 25, 110, 190);
  const double e1 = shape_features(only_component(m1)).eccentricity;
  const double e2 = shape_features(only_component(m2)).eccentricity;
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-6));
}

TEST_CASE("a one-pixel-wide line has eccentricity near 1 but below it") {
  BinaryMask m(64, 64);
  for (int x = 10; x < 50; ++x) m.set(x, 30, true);
  const double e = shape_features(only_component(m)).eccentricity;
  CHECK(e > 0.99);
  CHECK(e < 1.0);  // the 1/12 correction keeps it finite
}

TEST_CASE("center_distance worked example") {
  // centroid offset 125.5 px in a 500x500 image; half diagonal ~353.55
  RegionCandidate c;
  c.cx = (500 - 1) / 2.0 + 125.5;
  c.cy = (500 - 1) / 2.0;
  CHECK(center_distance(c, 500, 500) ==
        doctest::Approx(125.5 / (std::sqrt(2.0) * 250.0)).epsilon(1e-9));
  CHECK(center_distance(c, 500, 500) == doctest::Approx(0.355).epsilon(0.01));
}

TEST_CASE("center_distance is 0 at the center and capped at 1") {
  RegionCandidate c;
  c.cx = (100 - 1) / 2.0;
  c.cy = (100 - 1) / 2.0;
  CHECK(center_distance(c, 100, 100) == 0.0);
  c.cx = -500;
  c.cy = -500;
  CHECK(center_distance(c, 100, 100) == 1.0);
}

TEST_CASE("intensity features match brute-force region means") {
  const int n = 40;
  std::mt19937 rng(8);
  std::uniform_real_distribution<> uni(0, 1);

  RasterImage plane(n, n, Colorspace::Gray);
  for (double& v : plane.planes[0]) v = uni(rng);
  RasterImage rgb(n, n, Colorspace::RGB);
  for (auto& p : rgb.planes)
    for (double& v : p) v = uni(rng);
  const RasterImage ycbcr = rgb_to_ycbcr(rgb);

  BinaryMask mask(n, n);
  for (int y = 10; y < 22; ++y)
    for (int x = 14; x < 30; ++x) mask.set(x, y, true);
  FieldMask field(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < 5; ++x) field.invalidate(x, y, FieldReason::LateralBand);

  const IntensityFeatures f = intensity_features(plane, ycbcr, mask, field);

  double sl = 0, sb = 0, yl = 0, yb = 0;
  std::size_t nl = 0, nb = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!field.valid(x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * n + x;
      if (mask.at(x, y)) {
        sl += plane.planes[0][i];
        yl += ycbcr.planes[0][i];
        ++nl;
      } else {
        sb += plane.planes[0][i];
        yb += ycbcr.planes[0][i];
        ++nb;
      }
    }
  CHECK(f.mean_lesion == doctest::Approx(sl / nl).epsilon(1e-12));
  CHECK(f.mean_background == doctest::Approx(sb / nb).epsilon(1e-12));
  CHECK(f.y_lesion == doctest::Approx(yl / nl).epsilon(1e-12));
  CHECK(f.y_background == doctest::Approx(yb / nb).epsilon(1e-12));
}

TEST_CASE("intensity features error paths") {
  const RasterImage plane(8, 8, Colorspace::Gray, 0.5);
  RasterImage rgb(8, 8, Colorspace::RGB, 0.5);
  const RasterImage ycbcr = rgb_to_ycbcr(rgb);
  const FieldMask field(8, 8);

  // empty lesion is a caller bug
  CHECK_THROWS_AS(
      intensity_features(plane, ycbcr, BinaryMask(8, 8), field),
      std::invalid_argument);

  // lesion covering every valid pixel leaves no background
  BinaryMask full(8, 8);
  for (auto& b : full.bits) b = 1;
  CHECK_THROWS_AS(intensity_features(plane, ycbcr, full, field),
                  NoBackgroundError);
}

TEST_CASE("assemble_features fills all 13 slots consistently") {
  const int n = 64;
  RasterImage plane(n, n, Colorspace::Gray);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      plane.set(0, x, y, (x >= 20 && x < 44 && y >= 20 && y < 44) ? 0.2 : 0.8);
  RasterImage rgb(n, n, Colorspace::RGB, 0.6);
  const RasterImage ycbcr = rgb_to_ycbcr(rgb);

  BinaryMask mask(n, n);
  for (int y = 20; y < 44; ++y)
    for (int x = 20; x < 44; ++x) mask.set(x, y, true);
  const RegionCandidate c = only_component(mask);
  const FieldMask field(n, n);

  const FeatureVector f = assemble_features(c, plane, ycbcr, mask, field, n, n);
  CHECK(f.extent == doctest::Approx(1.0));
  CHECK(f.solidity == doctest::Approx(1.0));
  CHECK(f.area_perimeter == doctest::Approx(24.0 * 24.0 / 96.0));
  CHECK(f.eccentricity == doctest::Approx(0.0).epsilon(1e-9));
  // square centered at (31.5, 31.5) = image center
  CHECK(f.center_distance == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.mean_lesion == doctest::Approx(0.2));
  CHECK(f.mean_background == doctest::Approx(0.8));
  // constant RGB 0.6 -> Y = 0.6, Cb = Cr = 0.5 everywhere
  CHECK(f.y_lesion == doctest::Approx(0.6));
  CHECK(f.y_background == doctest::Approx(0.6));
  CHECK(f.cb_lesion == doctest::Approx(0.5));
  CHECK(f.cr_background == doctest::Approx(0.5));
}

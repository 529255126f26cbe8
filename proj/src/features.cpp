#include "lesionseg/features.hpp"

#include <cmath>

namespace lesionseg {

std::array<double, 13> FeatureVector::as_array() const {
  return {extent,        solidity,      area_perimeter, eccentricity,
          center_distance, mean_lesion, mean_background, y_lesion,
          y_background,  cb_lesion,     cb_background,  cr_lesion,
          cr_background};
}

FeatureVector FeatureVector::from_array(const std::array<double, 13>& a) {
  FeatureVector f;
  f.extent = a[0];
  f.solidity = a[1];
  f.area_perimeter = a[2];
  f.eccentricity = a[3];
  f.center_distance = a[4];
  f.mean_lesion = a[5];
  f.mean_background = a[6];
  f.y_lesion = a[7];
  f.y_background = a[8];
  f.cb_lesion = a[9];
  f.cb_background = a[10];
  f.cr_lesion = a[11];
  f.cr_background = a[12];
  return f;
}

ShapeFeatures shape_features(const RegionCandidate& c) {
  ShapeFeatures s;
  s.extent = c.extent();
  s.solidity = c.solidity();
  s.area_perimeter = static_cast<double>(c.area) / c.perimeter;

  // covariance of the pixel-square distribution
  const double a = c.mu20 / static_cast<double>(c.area) + 1.0 / 12.0;
  const double b = c.mu11 / static_cast<double>(c.area);
  const double d = c.mu02 / static_cast<double>(c.area) + 1.0 / 12.0;
  const double common = std::sqrt((a - d) * (a - d) / 4.0 + b * b);
  const double lam1 = (a + d) / 2.0 + common;
  const double lam2 = (a + d) / 2.0 - common;
  s.eccentricity =
      lam1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - lam2 / lam1)) : 0.0;
  return s;
}

double center_distance(const RegionCandidate& c, int img_w, int img_h) {
  const double ccx = (img_w - 1) / 2.0, ccy = (img_h - 1) / 2.0;
  const double d = std::hypot(c.cx - ccx, c.cy - ccy);
  const double half_diag = std::hypot(img_w, img_h) / 2.0;
  return half_diag > 0.0 ? std::min(1.0, d / half_diag) : 0.0;
}

IntensityFeatures intensity_features(const RasterImage& segmented_plane,
                                     const RasterImage& ycbcr,
                                     const BinaryMask& mask,
                                     const FieldMask& field) {
  if (segmented_plane.colorspace != Colorspace::Gray)
    throw std::invalid_argument("intensity_features: expected GRAY plane");
  ycbcr.require(Colorspace::YCbCr, "intensity_features");
  const std::size_t n = mask.bits.size();
  double les[4] = {0, 0, 0, 0}, bg[4] = {0, 0, 0, 0};
  std::size_t nles = 0, nbg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (field.reason[i] != FieldReason::None) continue;
    double* acc;
    if (mask.bits[i]) {
      acc = les;
      ++nles;
    } else {
      acc = bg;
      ++nbg;
    }
    acc[0] += segmented_plane.planes[0][i];
    acc[1] += ycbcr.planes[0][i];
    acc[2] += ycbcr.planes[1][i];
    acc[3] += ycbcr.planes[2][i];
  }
  if (nles == 0)
    throw std::invalid_argument("intensity_features: empty lesion mask");
  if (nbg == 0) throw NoBackgroundError();
  IntensityFeatures f{};
  f.mean_lesion = les[0] / nles;
  f.y_lesion = les[1] / nles;
  f.cb_lesion = les[2] / nles;
  f.cr_lesion = les[3] / nles;
  f.mean_background = bg[0] / nbg;
  f.y_background = bg[1] / nbg;
  f.cb_background = bg[2] / nbg;
  f.cr_background = bg[3] / nbg;
  return f;
}

FeatureVector assemble_features(const RegionCandidate& c,
                                const RasterImage& segmented_plane,
                                const RasterImage& ycbcr,
                                const BinaryMask& mask, const FieldMask& field,
                                int img_w, int img_h) {
  const ShapeFeatures s = shape_features(c);
  const IntensityFeatures in =
      intensity_features(segmented_plane, ycbcr, mask, field);
  FeatureVector f;
  f.extent = s.extent;
  f.solidity = s.solidity;
  f.area_perimeter = s.area_perimeter;
  f.eccentricity = s.eccentricity;
  f.center_distance = center_distance(c, img_w, img_h);
  f.mean_lesion = in.mean_lesion;
  f.mean_background = in.mean_background;
  f.y_lesion = in.y_lesion;
  f.y_background = in.y_background;
  f.cb_lesion = in.cb_lesion;
  f.cb_background = in.cb_background;
  f.cr_lesion = in.cr_lesion;
  f.cr_background = in.cr_background;
  return f;
}

}  // namespace lesionseg

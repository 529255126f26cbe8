#pragma once

#include <array>

#include "lesionseg/artifacts.hpp"
#include "lesionseg/image.hpp"
#include "lesionseg/mask.hpp"
#include "lesionseg/regions.hpp"

namespace lesionseg {

// The 13 predictor inputs, in their canonical order.
struct FeatureVector {
  double extent = 0.0;           // f1
  double solidity = 0.0;         // f2
  double area_perimeter = 0.0;   // f3
  double eccentricity = 0.0;     // f4
  double center_distance = 0.0;  // f5
  double mean_lesion = 0.0;      // f6, preprocessed segmented plane
  double mean_background = 0.0;  // f7
  double y_lesion = 0.0;         // f8, Y/Cb/Cr of the resized original
  double y_background = 0.0;     // f9
  double cb_lesion = 0.0;        // f10
  double cb_background = 0.0;    // f11
  double cr_lesion = 0.0;        // f12
  double cr_background = 0.0;    // f13

  std::array<double, 13> as_array() const;
  static FeatureVector from_array(const std::array<double, 13>& a);
};

inline constexpr int kNumFeatures = 13;

struct ShapeFeatures {
  double extent = 0.0;
  double solidity = 0.0;
  double area_perimeter = 0.0;
  double eccentricity = 0.0;
};

// Eccentricity comes from the equivalent ellipse of the second central
// moments (with the 1/12 square-pixel correction), so it stays in [0,1).
ShapeFeatures shape_features(const RegionCandidate& c);

// Centroid-to-center distance over half the image diagonal.
double center_distance(const RegionCandidate& c, int img_w, int img_h);

struct NoBackgroundError : std::runtime_error {
  NoBackgroundError()
      : std::runtime_error("features: no valid background pixels") {}
};

struct IntensityFeatures {
  double mean_lesion, mean_background;
  double y_lesion, y_background;
  double cb_lesion, cb_background;
  double cr_lesion, cr_background;
};

// Means of the segmented plane and of the Y/Cb/Cr planes over the lesion and
// over the valid background (field-invalid pixels excluded from both).
IntensityFeatures intensity_features(const RasterImage& segmented_plane,
                                     const RasterImage& ycbcr,
                                     const BinaryMask& mask,
                                     const FieldMask& field);

FeatureVector assemble_features(const RegionCandidate& c,
                                const RasterImage& segmented_plane,
                                const RasterImage& ycbcr,
                                const BinaryMask& mask, const FieldMask& field,
                                int img_w, int img_h);

}  // namespace lesionseg

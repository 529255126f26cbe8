#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lesionseg/mask.hpp"

namespace lesionseg {

// One 8-connected component with its geometry. pixels are flat y*width+x
// indices into the source mask.
struct RegionCandidate {
  int label = 0;
  std::int64_t area = 0;
  int min_x = 0, min_y = 0, bbox_w = 0, bbox_h = 0;
  double cx = 0.0, cy = 0.0;       // centroid of pixel centers
  double perimeter = 0.0;          // pixel edges adjacent to bg or border
  double hull_area = 0.0;          // convex hull over pixel corner points
  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;  // central moments
  std::vector<std::uint32_t> pixels;

  double extent() const {
    return static_cast<double>(area) /
           (static_cast<double>(bbox_w) * bbox_h);
  }
  double solidity() const {
    return hull_area > 0.0
               ? std::min(1.0, static_cast<double>(area) / hull_area)
               : 1.0;
  }
};

// 8-connected labeling, label order = row-major first pixel.
std::vector<RegionCandidate> connected_components(const BinaryMask& mask);

// Keeps candidates with area >= min_area_frac * img_area AND
// extent >= min_extent AND solidity >= min_solidity (boundaries kept).
std::vector<RegionCandidate> filter_candidates(
    const std::vector<RegionCandidate>& cands, double img_area,
    double min_area_frac = 0.002, double min_extent = 0.2,
    double min_solidity = 0.4);

// Candidate whose centroid is closest to ((w-1)/2, (h-1)/2); ties go to the
// larger area, then the lower label.
std::optional<RegionCandidate> select_center(
    const std::vector<RegionCandidate>& cands, int img_w, int img_h);

BinaryMask mask_from_candidate(const RegionCandidate& c, int width,
                               int height);

// Convex hull area of a point set (monotone chain + shoelace). Exposed for
// reuse; points may contain duplicates.
double convex_hull_area(std::vector<std::pair<double, double>> pts);

}  // namespace lesionseg

#include "lesionseg/otsu.hpp"

namespace lesionseg {

Histogram histogram(const RasterImage& plane, const FieldMask& field) {
  if (plane.colorspace != Colorspace::Gray)
    throw std::invalid_argument("histogram: expected GRAY plane");
  if (plane.width != field.width || plane.height != field.height)
    throw std::invalid_argument("histogram: field dimensions differ");
  Histogram h{};
  for (std::size_t i = 0; i < plane.planes[0].size(); ++i)
    if (field.reason[i] == FieldReason::None)
      ++h[value_bin(plane.planes[0][i])];
  return h;
}

double otsu_from_histogram(const Histogram& h) {
  std::uint64_t total = 0;
  int nonzero = 0;
  double sum = 0.0;
  for (int b = 0; b < 256; ++b) {
    total += h[b];
    nonzero += h[b] > 0;
    sum += static_cast<double>(b) * h[b];
  }
  if (nonzero < 2) throw NoContrastError();

  int best_k = 0;
  double best_var = -1.0;
  std::uint64_t w0 = 0;
  double sum0 = 0.0;
  for (int k = 0; k < 255; ++k) {
    w0 += h[k];
    sum0 += static_cast<double>(k) * h[k];
    const std::uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum - sum0) / w1;
    const double var = static_cast<double>(w0) * static_cast<double>(w1) *
                       (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_k = k;
    }
  }
  return (best_k + 0.5) / 255.0;
}

double otsu_threshold(const RasterImage& plane, const FieldMask& field) {
  return otsu_from_histogram(histogram(plane, field));
}

BinaryMask binarize(const RasterImage& plane, double threshold,
                    const FieldMask& field, Polarity polarity) {
  if (plane.width != field.width || plane.height != field.height)
    throw std::invalid_argument("binarize: field dimensions differ");
  const auto& v = plane.planes[0];
  bool lesion_is_dark = true;
  if (polarity == Polarity::Bright) {
    lesion_is_dark = false;
  } else if (polarity == Polarity::Minority) {
    std::size_t dark = 0, bright = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (field.reason[i] != FieldReason::None) continue;
      (v[i] <= threshold ? dark : bright)++;
    }
    lesion_is_dark = dark <= bright;  // tie -> darker side
  }
  BinaryMask out(plane.width, plane.height);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (field.reason[i] != FieldReason::None) continue;
    const bool dark_side = v[i] <= threshold;
    out.bits[i] = (dark_side == lesion_is_dark) ? 1 : 0;
  }
  return out;
}

}  // namespace lesionseg

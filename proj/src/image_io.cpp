#include "lesionseg/image_io.hpp"

#include <opencv2/imgcodecs.hpp>

namespace lesionseg {

RasterImage load_rgb(const std::string& path) {
  cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) throw std::runtime_error("cannot decode image: " + path);
  RasterImage out(bgr.cols, bgr.rows, Colorspace::RGB);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * bgr.cols + x;
      out.planes[0][i] = row[x][2] / 255.0;
      out.planes[1][i] = row[x][1] / 255.0;
      out.planes[2][i] = row[x][0] / 255.0;
    }
  }
  return out;
}

void save_rgb(const RasterImage& img, const std::string& path) {
  img.require(Colorspace::RGB, "save_rgb");
  cv::Mat bgr(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      auto q = [](double v) {
        return cv::saturate_cast<uchar>(v * 255.0 + 0.5);
      };
      row[x] = {q(img.planes[2][i]), q(img.planes[1][i]), q(img.planes[0][i])};
    }
  }
  if (!cv::imwrite(path, bgr))
    throw std::runtime_error("cannot write image: " + path);
}

void save_mask_png(const BinaryMask& mask, const std::string& path) {
  cv::Mat gray(mask.height, mask.width, CV_8UC1);
  for (int y = 0; y < mask.height; ++y) {
    uchar* row = gray.ptr<uchar>(y);
    for (int x = 0; x < mask.width; ++x) row[x] = mask.at(x, y) ? 255 : 0;
  }
  if (!cv::imwrite(path, gray))
    throw std::runtime_error("cannot write mask: " + path);
}

BinaryMask load_mask(const std::string& path) {
  cv::Mat gray = cv::imread(path, cv::IMREAD_GRAYSCALE);
  if (gray.empty()) throw std::runtime_error("cannot decode mask: " + path);
  BinaryMask out(gray.cols, gray.rows);
  for (int y = 0; y < gray.rows; ++y) {
    const uchar* row = gray.ptr<uchar>(y);
    for (int x = 0; x < gray.cols; ++x) out.set(x, y, row[x] > 127);
  }
  return out;
}

}  // namespace lesionseg

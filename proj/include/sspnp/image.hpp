#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sspnp {

// Dense height x width x channels raster of 64-bit reals, row-major with
// interleaved channels. Restoration code treats values as intensities in
// [0,1], but intermediate iterates are allowed to leave that range.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0)
      : height_(height), width_(width), channels_(channels),
        data_(static_cast<size_t>(height) * width * channels, fill) {
    if (height <= 0 || width <= 0 || channels <= 0) {
      throw std::invalid_argument("Image: dimensions must be positive");
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int y, int x, int c) {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int y, int x, int c) const {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  std::string shape_string() const {
    return std::to_string(height_) + "x" + std::to_string(width_) + "x" +
           std::to_string(channels_);
  }

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

void require_same_shape(const Image& a, const Image& b, const char* where);

// Elementwise helpers shared by the solvers.
Image add(const Image& a, const Image& b);
Image sub(const Image& a, const Image& b);
Image scale(const Image& a, double s);
// a + s*b
Image add_scaled(const Image& a, double s, const Image& b);
double dot(const Image& a, const Image& b);
double norm(const Image& a);
double mean_value(const Image& a);
double max_abs_diff(const Image& a, const Image& b);
bool all_finite(const Image& a);
Image clamp01(const Image& a);

Image crop(const Image& a, int y0, int x0, int height, int width);

}  // namespace sspnp

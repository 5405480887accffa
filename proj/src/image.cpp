#include "sspnp/image.hpp"

#include <algorithm>
#include <cmath>

namespace sspnp {

void require_same_shape(const Image& a, const Image& b, const char* where) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(where) + ": shape mismatch " +
                                a.shape_string() + " vs " + b.shape_string());
  }
}

Image add(const Image& a, const Image& b) {
  require_same_shape(a, b, "add");
  Image out = a;
  for (size_t i = 0; i < out.size(); ++i) out.raw()[i] += b.raw()[i];
  return out;
}

Image sub(const Image& a, const Image& b) {
  require_same_shape(a, b, "sub");
  Image out = a;
  for (size_t i = 0; i < out.size(); ++i) out.raw()[i] -= b.raw()[i];
  return out;
}

Image scale(const Image& a, double s) {
  Image out = a;
  for (double& v : out.raw()) v *= s;
  return out;
}

Image add_scaled(const Image& a, double s, const Image& b) {
  require_same_shape(a, b, "add_scaled");
  Image out = a;
  for (size_t i = 0; i < out.size(); ++i) out.raw()[i] += s * b.raw()[i];
  return out;
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a.raw()[i] * b.raw()[i];
  return acc;
}

double norm(const Image& a) { return std::sqrt(dot(a, a)); }

double mean_value(const Image& a) {
  double acc = 0.0;
  for (double v : a.raw()) acc += v;
  return a.size() ? acc / static_cast<double>(a.size()) : 0.0;
}

double max_abs_diff(const Image& a, const Image& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.raw()[i] - b.raw()[i]));
  }
  return m;
}

bool all_finite(const Image& a) {
  for (double v : a.raw()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Image clamp01(const Image& a) {
  Image out = a;
  for (double& v : out.raw()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Image crop(const Image& a, int y0, int x0, int height, int width) {
  if (y0 < 0 || x0 < 0 || y0 + height > a.height() || x0 + width > a.width()) {
    throw std::invalid_argument("crop: window outside image");
  }
  Image out(height, width, a.channels());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        out.at(y, x, c) = a.at(y0 + y, x0 + x, c);
      }
    }
  }
  return out;
}

}  // namespace sspnp

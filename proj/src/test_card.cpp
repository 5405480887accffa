#include "sspnp/test_card.hpp"

#include <algorithm>
#include <cmath>

#include "sspnp/rng.hpp"

namespace sspnp::harness {

Image make_test_card(int height, int width, int channels, uint64_t seed) {
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("make_test_card: channels must be 1 or 3");
  }
  Rng rng(seed ^ 0x5370c4d2u);
  Image img(height, width, channels);

  // Background gradient.
  double base[3], gx[3], gy[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(0.3, 0.7);
    gx[c] = rng.uniform(-0.25, 0.25);
    gy[c] = rng.uniform(-0.25, 0.25);
  }

  struct Blob {
    double cy, cx, ry, rx, color[3];
  };
  std::vector<Blob> soft(6), hard(5);
  for (auto& b : soft) {
    b.cy = rng.uniform(0.0, height);
    b.cx = rng.uniform(0.0, width);
    b.ry = rng.uniform(0.10, 0.35) * height;
    b.rx = rng.uniform(0.10, 0.35) * width;
    for (double& c : b.color) c = rng.uniform(-0.35, 0.35);
  }
  for (auto& b : hard) {
    b.cy = rng.uniform(0.1, 0.9) * height;
    b.cx = rng.uniform(0.1, 0.9) * width;
    b.ry = rng.uniform(0.04, 0.18) * height;
    b.rx = rng.uniform(0.04, 0.18) * width;
    for (double& c : b.color) c = rng.uniform(0.05, 0.95);
  }

  double tex_fy[3], tex_fx[3], tex_amp[3], tex_ph[3];
  for (int t = 0; t < 3; ++t) {
    tex_fy[t] = rng.uniform(4.0, 14.0);
    tex_fx[t] = rng.uniform(4.0, 14.0);
    tex_amp[t] = rng.uniform(0.01, 0.04);
    tex_ph[t] = rng.uniform(0.0, 6.28318530717958648);
  }

  for (int y = 0; y < height; ++y) {
    const double ny = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    for (int x = 0; x < width; ++x) {
      const double nx = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
      double px[3];
      for (int c = 0; c < 3; ++c) px[c] = base[c] + gx[c] * nx + gy[c] * ny;

      for (const auto& b : soft) {
        const double dy = (y - b.cy) / b.ry;
        const double dx = (x - b.cx) / b.rx;
        const double wgt = std::exp(-(dy * dy + dx * dx));
        for (int c = 0; c < 3; ++c) px[c] += b.color[c] * wgt;
      }
      for (const auto& b : hard) {
        const double dy = (y - b.cy) / b.ry;
        const double dx = (x - b.cx) / b.rx;
        if (dy * dy + dx * dx <= 1.0) {
          for (int c = 0; c < 3; ++c) px[c] = 0.75 * b.color[c] + 0.25 * px[c];
        }
      }
      double tex = 0.0;
      for (int t = 0; t < 3; ++t) {
        tex += tex_amp[t] * std::sin(tex_fy[t] * ny * 6.283185 + tex_fx[t] * nx * 6.283185 + tex_ph[t]);
      }
      for (int c = 0; c < 3; ++c) px[c] += tex;

      if (channels == 1) {
        const double g = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        img.at(y, x, 0) = std::clamp(g, 0.02, 0.98);
      } else {
        for (int c = 0; c < 3; ++c) img.at(y, x, c) = std::clamp(px[c], 0.02, 0.98);
      }
    }
  }
  return img;
}

}  // namespace sspnp::harness

#pragma once

#include <optional>

#include "sspnp/image.hpp"
#include "sspnp/tensor.hpp"

namespace sspnp::op {

// Centered, unit-sum Gaussian blur kernel with odd side length.
struct GaussianKernel {
  int size = 0;
  double stddev = 0.0;
  ndgrad::Tensor taps;  // [size, size], sums to 1

  double tap(int dy, int dx) const {  // dy, dx in [-size/2, size/2]
    const int r = size / 2;
    return taps.at(dy + r, dx + r);
  }
};

GaussianKernel make_gaussian_kernel(int size, double stddev);

// Identity kernel of the given size (single center tap).
GaussianKernel make_delta_kernel(int size);

// RGGB color filter array anchored at pixel (0,0).
struct BayerMask {
  int height = 0;
  int width = 0;

  // Channel sampled at a pixel: 0=R, 1=G, 2=B.
  int channel_at(int y, int x) const {
    const int ry = y & 1, rx = x & 1;
    if (ry == 0 && rx == 0) return 0;
    if (ry == 1 && rx == 1) return 2;
    return 1;
  }

  // Binary H x W x 3 mask image (exactly one channel set per pixel).
  Image mask_image() const;
};

BayerMask make_bayer_mask(int height, int width);

// Keep each pixel's sampled channel, zero the rest.
Image apply_mask(const BayerMask& mask, const Image& img);

// Channelwise 2-D circular convolution (periodic boundary).
Image convolve(const Image& img, const GaussianKernel& kernel);
// Convolution with the 180-degree rotated kernel (the adjoint of convolve).
Image convolve_adjoint(const Image& img, const GaussianKernel& kernel);

// Keep every s-th pixel starting at (0,0) / insert zeros (exact adjoint pair).
Image downsample(const Image& img, int s);
Image upsample_zero(const Image& img, int s);

enum class OperatorKind { deconv, sr, joint };

// Linear degradation A with its exact adjoint:
//   deconv: A(x) = k*x                adjoint: k~*r
//   sr:     A(x) = (k*x) down_s       adjoint: k~*(up_zero(r))
//   joint:  A(x) = k*(M.x)            adjoint: M.(k~*r)
class ForwardOperator {
 public:
  static ForwardOperator deconv(GaussianKernel kernel);
  static ForwardOperator sr(GaussianKernel kernel, int scale);
  static ForwardOperator joint(GaussianKernel kernel, BayerMask mask);

  Image apply(const Image& x) const;
  Image adjoint(const Image& r) const;

  // Density-normalized backprojection: the blur-spread adjoint divided by
  // the same spreading applied to A(1), so decimated or mosaicked
  // observations lift to the reconstruction grid at full brightness with no
  // sampling holes. Coincides with adjoint() for plain deconvolution.
  Image normalized_lift(const Image& r) const;

  OperatorKind kind() const { return kind_; }
  const GaussianKernel& kernel() const { return kernel_; }
  int scale() const { return scale_; }

  // Observation shape for a given reconstruction-grid shape.
  void observation_shape(int h, int w, int& oh, int& ow) const;

 private:
  OperatorKind kind_ = OperatorKind::deconv;
  GaussianKernel kernel_;
  int scale_ = 1;
  std::optional<BayerMask> mask_;
};

}  // namespace sspnp::op

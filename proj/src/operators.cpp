#include "sspnp/operators.hpp"

#include <cmath>

#include "fft_util.hpp"

namespace sspnp::op {

GaussianKernel make_gaussian_kernel(int size, double stddev) {
  if (size <= 0 || size % 2 == 0) {
    throw std::invalid_argument("make_gaussian_kernel: size must be odd and positive");
  }
  if (stddev <= 0.0) {
    throw std::invalid_argument("make_gaussian_kernel: stddev must be positive");
  }
  GaussianKernel k;
  k.size = size;
  k.stddev = stddev;
  k.taps = ndgrad::Tensor({size, size});
  const int r = size / 2;
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double v = std::exp(-(dy * dy + dx * dx) / (2.0 * stddev * stddev));
      k.taps.at(dy + r, dx + r) = v;
      sum += v;
    }
  }
  for (double& v : k.taps.raw()) v /= sum;
  return k;
}

GaussianKernel make_delta_kernel(int size) {
  if (size <= 0 || size % 2 == 0) {
    throw std::invalid_argument("make_delta_kernel: size must be odd and positive");
  }
  GaussianKernel k;
  k.size = size;
  k.stddev = 0.0;
  k.taps = ndgrad::Tensor({size, size});
  k.taps.at(size / 2, size / 2) = 1.0;
  return k;
}

Image BayerMask::mask_image() const {
  Image m(height, width, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      m.at(y, x, channel_at(y, x)) = 1.0;
    }
  }
  return m;
}

BayerMask make_bayer_mask(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("make_bayer_mask: dimensions must be positive");
  }
  return BayerMask{height, width};
}

Image apply_mask(const BayerMask& mask, const Image& img) {
  if (img.channels() != 3) {
    throw std::invalid_argument("apply_mask: mosaic needs a 3-channel image");
  }
  if (img.height() != mask.height || img.width() != mask.width) {
    throw std::invalid_argument("apply_mask: mask size does not match image");
  }
  Image out(img.height(), img.width(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int c = mask.channel_at(y, x);
      out.at(y, x, c) = img.at(y, x, c);
    }
  }
  return out;
}

namespace {

void check_kernel_fits(const GaussianKernel& k, const Image& img, const char* where) {
  if (k.size > img.height() || k.size > img.width()) {
    throw std::invalid_argument(std::string(where) + ": kernel size " +
                                std::to_string(k.size) + " exceeds image " +
                                img.shape_string());
  }
}

Image convolve_spectral(const Image& img, const GaussianKernel& kernel, bool conjugate) {
  const int h = img.height(), w = img.width(), c = img.channels();
  auto otf = detail::kernel_otf(kernel, h, w);
  if (conjugate) {
    for (auto& v : otf) v = std::conj(v);
  }
  Image out(h, w, c);
  std::vector<double> plane(static_cast<size_t>(h) * w);
  std::vector<std::complex<double>> spec;
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) plane[static_cast<size_t>(y) * w + x] = img.at(y, x, ch);
    }
    detail::fft2(h, w, plane.data(), spec);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= otf[i];
    detail::ifft2(h, w, spec, plane.data());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.at(y, x, ch) = plane[static_cast<size_t>(y) * w + x];
    }
  }
  return out;
}

}  // namespace

Image convolve(const Image& img, const GaussianKernel& kernel) {
  check_kernel_fits(kernel, img, "convolve");
  return convolve_spectral(img, kernel, false);
}

Image convolve_adjoint(const Image& img, const GaussianKernel& kernel) {
  check_kernel_fits(kernel, img, "convolve_adjoint");
  return convolve_spectral(img, kernel, true);
}

Image downsample(const Image& img, int s) {
  if (s < 1) throw std::invalid_argument("downsample: scale must be >= 1");
  if (img.height() % s != 0 || img.width() % s != 0) {
    throw std::invalid_argument("downsample: dimensions " + img.shape_string() +
                                " not divisible by scale " + std::to_string(s));
  }
  Image out(img.height() / s, img.width() / s, img.channels());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = img.at(y * s, x * s, c);
      }
    }
  }
  return out;
}

Image upsample_zero(const Image& img, int s) {
  if (s < 1) throw std::invalid_argument("upsample_zero: scale must be >= 1");
  Image out(img.height() * s, img.width() * s, img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(y * s, x * s, c) = img.at(y, x, c);
      }
    }
  }
  return out;
}

ForwardOperator ForwardOperator::deconv(GaussianKernel kernel) {
  ForwardOperator a;
  a.kind_ = OperatorKind::deconv;
  a.kernel_ = std::move(kernel);
  return a;
}

ForwardOperator ForwardOperator::sr(GaussianKernel kernel, int scale) {
  if (scale < 1) throw std::invalid_argument("ForwardOperator::sr: scale must be >= 1");
  ForwardOperator a;
  a.kind_ = OperatorKind::sr;
  a.kernel_ = std::move(kernel);
  a.scale_ = scale;
  return a;
}

ForwardOperator ForwardOperator::joint(GaussianKernel kernel, BayerMask mask) {
  ForwardOperator a;
  a.kind_ = OperatorKind::joint;
  a.kernel_ = std::move(kernel);
  a.mask_ = mask;
  return a;
}

Image ForwardOperator::apply(const Image& x) const {
  switch (kind_) {
    case OperatorKind::deconv:
      return convolve(x, kernel_);
    case OperatorKind::sr:
      return downsample(convolve(x, kernel_), scale_);
    case OperatorKind::joint:
      return convolve(apply_mask(*mask_, x), kernel_);
  }
  throw std::logic_error("ForwardOperator::apply: unknown kind");
}

Image ForwardOperator::adjoint(const Image& r) const {
  switch (kind_) {
    case OperatorKind::deconv:
      return convolve_adjoint(r, kernel_);
    case OperatorKind::sr:
      return convolve_adjoint(upsample_zero(r, scale_), kernel_);
    case OperatorKind::joint:
      return apply_mask(*mask_, convolve_adjoint(r, kernel_));
  }
  throw std::logic_error("ForwardOperator::adjoint: unknown kind");
}

Image ForwardOperator::normalized_lift(const Image& r) const {
  if (kind_ == OperatorKind::deconv) return convolve_adjoint(r, kernel_);

  // Numerator: the adjoint without its final sampling projection.
  Image numerator = kind_ == OperatorKind::sr
                        ? convolve_adjoint(upsample_zero(r, scale_), kernel_)
                        : convolve_adjoint(r, kernel_);
  // Denominator: the same spreading applied to A(ones).
  Image ones(numerator.height(), numerator.width(), numerator.channels(), 1.0);
  Image density = kind_ == OperatorKind::sr
                      ? convolve_adjoint(upsample_zero(downsample(convolve(ones, kernel_),
                                                                  scale_), scale_), kernel_)
                      : convolve_adjoint(convolve(apply_mask(*mask_, ones), kernel_), kernel_);
  Image out = numerator;
  for (size_t i = 0; i < out.size(); ++i) {
    out.raw()[i] /= std::max(density.raw()[i], 1e-6);
  }
  return out;
}

void ForwardOperator::observation_shape(int h, int w, int& oh, int& ow) const {
  if (kind_ == OperatorKind::sr) {
    if (h % scale_ != 0 || w % scale_ != 0) {
      throw std::invalid_argument("observation_shape: dimensions not divisible by scale");
    }
    oh = h / scale_;
    ow = w / scale_;
  } else {
    oh = h;
    ow = w;
  }
}

}  // namespace sspnp::op

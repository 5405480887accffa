#pragma once

#include <vector>

#include "sspnp/image.hpp"

namespace sspnp::metrics {

// PSNR of identical images is reported as this ceiling.
inline constexpr double kPsnrCeilingDb = 100.0;

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<double> psnr_per_channel;
  std::vector<double> ssim_per_channel;
};

// 10 log10(peak^2 / MSE) with the MSE taken over all channels, capped at
// kPsnrCeilingDb.
double psnr(const Image& a, const Image& b, double peak = 1.0);

// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5, K1=0.01,
// K2=0.03), computed per channel and averaged. Images must be at least
// 11 pixels on each side.
double ssim(const Image& a, const Image& b);

QualityReport quality_report(const Image& a, const Image& b, double peak = 1.0);

}  // namespace sspnp::metrics

#include "sspnp/metrics.hpp"

#include <array>
#include <cmath>

namespace sspnp::metrics {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

double channel_mse(const Image& a, const Image& b, int ch) {
  double acc = 0.0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const double d = a.at(y, x, ch) - b.at(y, x, ch);
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(a.height()) * a.width());
}

double mse_to_psnr(double mse, double peak) {
  if (mse <= 0.0) return kPsnrCeilingDb;
  const double value = 10.0 * std::log10(peak * peak / mse);
  return value > kPsnrCeilingDb ? kPsnrCeilingDb : value;
}

std::array<double, kWindow> window_taps() {
  std::array<double, kWindow> taps{};
  const int r = kWindow / 2;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[static_cast<size_t>(i + r)] = std::exp(-(i * i) / (2.0 * kWindowSigma * kWindowSigma));
    sum += taps[static_cast<size_t>(i + r)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable Gaussian filtering with clamp-to-edge boundary.
void gaussian_filter(const std::vector<double>& src, int h, int w, std::vector<double>& dst,
                     std::vector<double>& scratch) {
  static const std::array<double, kWindow> taps = window_taps();
  const int r = kWindow / 2;
  scratch.resize(src.size());
  dst.resize(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        int xx = x + k;
        xx = xx < 0 ? 0 : (xx >= w ? w - 1 : xx);
        acc += taps[static_cast<size_t>(k + r)] * src[static_cast<size_t>(y) * w + xx];
      }
      scratch[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        int yy = y + k;
        yy = yy < 0 ? 0 : (yy >= h ? h - 1 : yy);
        acc += taps[static_cast<size_t>(k + r)] * scratch[static_cast<size_t>(yy) * w + x];
      }
      dst[static_cast<size_t>(y) * w + x] = acc;
    }
  }
}

double channel_ssim(const Image& a, const Image& b, int ch) {
  const int h = a.height(), w = a.width();
  const size_t n = static_cast<size_t>(h) * w;
  std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      pa[i] = a.at(y, x, ch);
      pb[i] = b.at(y, x, ch);
      paa[i] = pa[i] * pa[i];
      pbb[i] = pb[i] * pb[i];
      pab[i] = pa[i] * pb[i];
    }
  }
  std::vector<double> mu_a, mu_b, m_aa, m_bb, m_ab, scratch;
  gaussian_filter(pa, h, w, mu_a, scratch);
  gaussian_filter(pb, h, w, mu_b, scratch);
  gaussian_filter(paa, h, w, m_aa, scratch);
  gaussian_filter(pbb, h, w, m_bb, scratch);
  gaussian_filter(pab, h, w, m_ab, scratch);

  const double c1 = kK1 * kK1;
  const double c2 = kK2 * kK2;
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double va = m_aa[i] - mu_a[i] * mu_a[i];
    const double vb = m_bb[i] - mu_b[i] * mu_b[i];
    const double cov = m_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
    acc += num / den;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

double psnr(const Image& a, const Image& b, double peak) {
  require_same_shape(a, b, "psnr");
  double mse = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a.raw()[i] - b.raw()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  return mse_to_psnr(mse, peak);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (a.height() < kWindow || a.width() < kWindow) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }
  double acc = 0.0;
  for (int c = 0; c < a.channels(); ++c) acc += channel_ssim(a, b, c);
  return acc / a.channels();
}

QualityReport quality_report(const Image& a, const Image& b, double peak) {
  require_same_shape(a, b, "quality_report");
  QualityReport report;
  report.psnr_db = psnr(a, b, peak);
  report.ssim = ssim(a, b);
  for (int c = 0; c < a.channels(); ++c) {
    report.psnr_per_channel.push_back(mse_to_psnr(channel_mse(a, b, c), peak));
    report.ssim_per_channel.push_back(channel_ssim(a, b, c));
  }
  return report;
}

}  // namespace sspnp::metrics

#include "fft_util.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace sspnp::op::detail {

namespace {

struct PlanSet {
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  PlanSet(int h, int w) {
    real_buf = fftw_alloc_real(static_cast<size_t>(h) * w);
    cplx_buf = fftw_alloc_complex(static_cast<size_t>(spectrum_size(h, w)));
    forward = fftw_plan_dft_r2c_2d(h, w, real_buf, cplx_buf, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(h, w, cplx_buf, real_buf, FFTW_ESTIMATE);
  }
  ~PlanSet() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(cplx_buf);
  }
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;
};

std::mutex g_mutex;
std::map<std::pair<int, int>, std::unique_ptr<PlanSet>>& plan_cache() {
  static auto* cache = new std::map<std::pair<int, int>, std::unique_ptr<PlanSet>>();
  return *cache;
}

PlanSet& plans_for(int h, int w) {
  auto& cache = plan_cache();
  auto it = cache.find({h, w});
  if (it == cache.end()) {
    it = cache.emplace(std::make_pair(h, w), std::make_unique<PlanSet>(h, w)).first;
  }
  return *it->second;
}

}  // namespace

void fft2(int h, int w, const double* src, std::vector<std::complex<double>>& out) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(h, w);
  std::memcpy(p.real_buf, src, static_cast<size_t>(h) * w * sizeof(double));
  fftw_execute(p.forward);
  const int n = spectrum_size(h, w);
  out.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = {p.cplx_buf[i][0], p.cplx_buf[i][1]};
}

void ifft2(int h, int w, const std::vector<std::complex<double>>& src, double* dst) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSet& p = plans_for(h, w);
  const int n = spectrum_size(h, w);
  for (int i = 0; i < n; ++i) {
    p.cplx_buf[i][0] = src[static_cast<size_t>(i)].real();
    p.cplx_buf[i][1] = src[static_cast<size_t>(i)].imag();
  }
  fftw_execute(p.backward);
  const double inv = 1.0 / (static_cast<double>(h) * w);
  for (size_t i = 0; i < static_cast<size_t>(h) * w; ++i) dst[i] = p.real_buf[i] * inv;
}

std::vector<std::complex<double>> kernel_otf(const GaussianKernel& kernel, int h, int w) {
  std::vector<double> padded(static_cast<size_t>(h) * w, 0.0);
  const int r = kernel.size / 2;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int y = ((dy % h) + h) % h;
      const int x = ((dx % w) + w) % w;
      padded[static_cast<size_t>(y) * w + x] += kernel.tap(dy, dx);
    }
  }
  std::vector<std::complex<double>> otf;
  fft2(h, w, padded.data(), otf);
  return otf;
}

}  // namespace sspnp::op::detail

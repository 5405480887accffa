#pragma once

#include <complex>
#include <vector>

#include "sspnp/operators.hpp"

namespace sspnp::op::detail {

// Half-spectrum (h x (w/2+1)) 2-D real FFT wrappers with cached plans.
// All callers run single-threaded; an internal lock serializes the buffers.
void fft2(int h, int w, const double* src, std::vector<std::complex<double>>& out);
void ifft2(int h, int w, const std::vector<std::complex<double>>& src, double* dst);

inline int spectrum_size(int h, int w) { return h * (w / 2 + 1); }

// Optical transfer function of a centered kernel on an h x w grid: the taps
// wrapped so the center lands at index (0,0), then transformed.
std::vector<std::complex<double>> kernel_otf(const GaussianKernel& kernel, int h, int w);

}  // namespace sspnp::op::detail

#pragma once

#include <functional>

#include "sspnp/image.hpp"
#include "sspnp/operators.hpp"

namespace sspnp::prox {

enum class ProxMethod { fft, cg, automatic };

struct ProxConfig {
  ProxMethod method = ProxMethod::automatic;
  double cg_tol = 1e-6;
  int cg_max_iters = 100;
};

struct CgResult {
  Image solution;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients for a symmetric positive definite map, stopping at
// ||linop(u) - b|| / ||b|| <= tol. Returns the best iterate with a warning
// on stderr when max_iters is hit first.
CgResult cg_solve(const std::function<Image(const Image&)>& linop, const Image& b,
                  const Image& x0, double tol, int max_iters);

// Minimizer of 1/2||u - v||^2 + delta * 1/2||A u - y||^2, i.e. the solution
// of (I + delta A^T A) u = v + delta A^T y. The fft method uses the Fourier
// diagonalization of A^T A and is valid for the deconv kind only; cg works
// for every kind; automatic picks fft for deconv and cg otherwise.
Image prox_data(const Image& v, const Image& y, const op::ForwardOperator& a,
                double delta, const ProxConfig& cfg = {});

// Isotropic total-variation denoising, channelwise dual projection:
// argmin_u 1/2||u - v||^2 + weight * TV(u).
Image tv_denoise(const Image& v, double weight, int iters);

}  // namespace sspnp::prox

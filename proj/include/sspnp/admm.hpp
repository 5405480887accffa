#pragma once

#include <functional>
#include <vector>

#include "sspnp/image.hpp"
#include "sspnp/operators.hpp"
#include "sspnp/prox.hpp"

namespace sspnp::admm {

// Per-iteration denoising strengths and data penalties. sigma decreases
// log-uniformly from sigma_hi to sigma_lo; mu rises as mu_base*(sigma_hi/sigma_k)^2
// so the data term tightens while the prior weakens.
struct AdmmSchedule {
  int iterations = 0;
  std::vector<double> sigma;
  std::vector<double> mu;
};

AdmmSchedule make_schedule(int iterations, double sigma_hi = 35.0 / 255.0,
                           double sigma_lo = 30.0 / 255.0, double mu_base = 1.0);

using Denoiser = std::function<Image(const Image&)>;

// Initialization of the split variables. `adjoint_both` starts both x^0 and
// z^0 at A^T(y); `zero_dual` keeps the warm start in z^0 and leaves the dual
// x^0 at zero, which keeps e^{k+1} + x^k on the image brightness scale.
enum class AdmmInit { adjoint_both, zero_dual };

struct AdmmOptions {
  AdmmSchedule schedule;
  prox::ProxConfig prox;
  AdmmInit init = AdmmInit::adjoint_both;
  bool return_z = false;     // report z^K instead of x^K
  bool random_z0 = false;    // draw z^0 uniform in [0,1] instead of the warm start
  uint64_t z0_seed = 0;
  bool record_iterates = false;  // keep every e/z/x for inspection
};

struct AdmmIterationRecord {
  int k = 0;
  double sigma = 0.0;
  double mu = 0.0;
  double psnr = 0.0;  // NaN when no reference was supplied
  double ssim = 0.0;
  double data_residual = 0.0;  // ||A z - y|| / ||y||
  double elapsed_seconds = 0.0;
};

struct AdmmResult {
  Image reconstruction;  // x^K, or z^K when return_z is set
  Image x_final;
  Image z_final;
  std::vector<AdmmIterationRecord> history;
  // Populated when record_iterates is set; x_iterates[0] is x^0.
  std::vector<Image> e_iterates, z_iterates, x_iterates;
};

// Splitting iteration with a plugged-in denoiser:
//   x^0 = A^T(y), z^0 = x^0
//   e^{k+1} = H(z^k - x^k)
//   z^{k+1} = prox_data(e^{k+1} + x^k, y, A, 1/mu_k)
//   x^{k+1} = x^k + e^{k+1} - z^{k+1}
// The denoiser is treated as frozen; it is never handed a mutable model.
AdmmResult run_admm(const Image& y, const op::ForwardOperator& a, const Denoiser& denoise,
                    const AdmmOptions& options, const Image* reference = nullptr);

void write_history_csv(const std::vector<AdmmIterationRecord>& history,
                       const std::string& path);

}  // namespace sspnp::admm

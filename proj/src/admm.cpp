#include "sspnp/admm.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "sspnp/metrics.hpp"
#include "sspnp/rng.hpp"

namespace sspnp::admm {

AdmmSchedule make_schedule(int iterations, double sigma_hi, double sigma_lo, double mu_base) {
  if (iterations < 1) throw std::invalid_argument("make_schedule: need at least one iteration");
  if (!(sigma_hi >= sigma_lo) || sigma_lo <= 0.0) {
    throw std::invalid_argument("make_schedule: need sigma_hi >= sigma_lo > 0");
  }
  if (mu_base <= 0.0) throw std::invalid_argument("make_schedule: mu_base must be positive");

  AdmmSchedule sched;
  sched.iterations = iterations;
  const double log_hi = std::log(sigma_hi);
  const double log_lo = std::log(sigma_lo);
  for (int k = 0; k < iterations; ++k) {
    const double t = iterations == 1 ? 0.0 : static_cast<double>(k) / (iterations - 1);
    const double sigma = std::exp(log_hi + t * (log_lo - log_hi));
    sched.sigma.push_back(sigma);
    sched.mu.push_back(mu_base * (sigma_hi / sigma) * (sigma_hi / sigma));
  }
  return sched;
}

namespace {

void check_iterate(const Image& img, int k, const char* name) {
  if (!all_finite(img)) {
    throw std::runtime_error("run_admm: non-finite values in " + std::string(name) +
                             " at iteration " + std::to_string(k));
  }
}

}  // namespace

AdmmResult run_admm(const Image& y, const op::ForwardOperator& a, const Denoiser& denoise,
                    const AdmmOptions& options, const Image* reference) {
  const AdmmSchedule& sched = options.schedule;
  if (sched.iterations < 1 ||
      sched.sigma.size() != static_cast<size_t>(sched.iterations) ||
      sched.mu.size() != static_cast<size_t>(sched.iterations)) {
    throw std::invalid_argument("run_admm: schedule is empty or inconsistent");
  }

  AdmmResult result;
  const auto t0 = std::chrono::steady_clock::now();
  const double y_norm = norm(y);

  const Image warm = a.adjoint(y);
  check_iterate(warm, 0, "x0");
  Image x = options.init == AdmmInit::adjoint_both
                ? warm
                : Image(warm.height(), warm.width(), warm.channels(), 0.0);
  Image z;
  if (options.random_z0) {
    z = Image(warm.height(), warm.width(), warm.channels());
    Rng rng(options.z0_seed);
    for (double& v : z.raw()) v = rng.uniform(0.0, 1.0);
  } else {
    z = warm;
  }

  if (options.record_iterates) result.x_iterates.push_back(x);

  for (int k = 0; k < sched.iterations; ++k) {
    const Image e = denoise(sub(z, x));
    check_iterate(e, k, "e");

    const double delta = 1.0 / sched.mu[static_cast<size_t>(k)];
    z = prox::prox_data(add(e, x), y, a, delta, options.prox);
    check_iterate(z, k, "z");

    x = add(x, sub(e, z));
    check_iterate(x, k, "x");

    AdmmIterationRecord rec;
    rec.k = k;
    rec.sigma = sched.sigma[static_cast<size_t>(k)];
    rec.mu = sched.mu[static_cast<size_t>(k)];
    if (reference) {
      rec.psnr = metrics::psnr(z, *reference);
      rec.ssim = metrics::ssim(z, *reference);
    } else {
      rec.psnr = std::numeric_limits<double>::quiet_NaN();
      rec.ssim = std::numeric_limits<double>::quiet_NaN();
    }
    rec.data_residual = y_norm > 0.0 ? norm(sub(a.apply(z), y)) / y_norm : norm(a.apply(z));
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);

    if (options.record_iterates) {
      result.e_iterates.push_back(e);
      result.z_iterates.push_back(z);
      result.x_iterates.push_back(x);
    }
  }

  result.x_final = x;
  result.z_final = z;
  result.reconstruction = options.return_z ? result.z_final : result.x_final;
  return result;
}

void write_history_csv(const std::vector<AdmmIterationRecord>& history,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_history_csv: cannot write " + path);
  os << "k,sigma_k,mu_k,psnr,ssim,data_residual\n";
  for (const auto& rec : history) {
    os << rec.k << "," << rec.sigma << "," << rec.mu << "," << rec.psnr << ","
       << rec.ssim << "," << rec.data_residual << "\n";
  }
}

}  // namespace sspnp::admm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sspnp/image.hpp"
#include "sspnp/model.hpp"

namespace sspnp::train {

struct TrainConfig {
  double noise_std = 0.1;  // synthetic training noise, independent of any measurement noise
  int iterations = 100;
  double lr = 1e-3;
  uint64_t seed = 0;
  // Fresh noise draw every iteration; set false to reuse one draw throughout.
  bool resample_noise = true;
  // When set, per-iteration losses are written as "iteration,mse" rows.
  std::string loss_log_path;
};

// img + N(0, std^2) i.i.d. per element, clamped to [0,1].
Image add_noise(const Image& img, double std, uint64_t seed);

struct TrainResult {
  inr::DenoiserModel model;
  std::vector<double> losses;  // one MSE value per iteration
};

// Fits the denoiser to one observed image: each iteration regresses the
// model output on noisy features back onto the observation itself. The
// returned weights are final; nothing downstream mutates them.
TrainResult train_single_shot(const Image& y, const TrainConfig& cfg,
                              inr::ActivationParams activation = {});

// Same, with full control over the network layout.
TrainResult train_single_shot(const Image& y, const inr::ModelConfig& model_cfg,
                              const TrainConfig& cfg);

}  // namespace sspnp::train

#pragma once

#include <cstdint>
#include <vector>

#include "sspnp/autodiff.hpp"

namespace sspnp::ndgrad {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed set of leaf parameters. `step()` requires
// every parameter to carry a gradient and zeroes the gradients afterwards.
class Adam {
 public:
  Adam(std::vector<Var> params, AdamConfig config = {});

  void step();
  int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  std::vector<Var> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamConfig config_;
  int64_t step_ = 0;
};

}  // namespace sspnp::ndgrad

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sspnp/activation.hpp"
#include "sspnp/image.hpp"
#include "sspnp/tensor.hpp"

namespace sspnp::inr {

struct ModelConfig {
  int input_dim = 5;  // px, py plus one value feature per channel
  int hidden_dim = 64;
  int hidden_layers = 2;
  int output_dim = 3;
  ActivationParams activation;
  uint64_t seed = 0;

  static ModelConfig for_channels(int channels, ActivationParams act = {},
                                  uint64_t seed = 0);
};

// Pixelwise multilayer perceptron mapping [px, py, values...] features to
// denoised values. Weight matrices are stored [in, out] so a feature batch
// multiplies from the left.
struct DenoiserModel {
  struct Layer {
    ndgrad::Tensor weight;  // [in, out]
    ndgrad::Tensor bias;    // [1, out]
  };

  ModelConfig config;
  std::vector<Layer> layers;  // hidden_layers + 1 entries, last one linear

  // Forward on a feature batch [n, input_dim] -> [n, output_dim], no clamp.
  ndgrad::Tensor forward(const ndgrad::Tensor& features) const;
};

DenoiserModel build_model(const ModelConfig& config);

// Feature matrix of an image: one row per pixel, [px, py, v_0..v_{C-1}]
// with coordinates normalized to [-1, 1].
ndgrad::Tensor image_features(const Image& img);

// Pixelwise application of the model; output is clamped to [0,1] and the
// input is left untouched.
Image apply_denoiser(const DenoiserModel& model, const Image& img);

// Bit-exact binary round trip.
void save_model(const DenoiserModel& model, const std::string& path);
DenoiserModel load_model(const std::string& path);

}  // namespace sspnp::inr

#include "sspnp/train.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sspnp/adam.hpp"
#include "sspnp/autodiff.hpp"
#include "sspnp/rng.hpp"

namespace sspnp::train {

Image add_noise(const Image& img, double std, uint64_t seed) {
  if (std <= 0.0) throw std::invalid_argument("add_noise: std must be positive");
  Rng rng(seed);
  Image out = img;
  for (double& v : out.raw()) {
    v += rng.gaussian(0.0, std);
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
  return out;
}

namespace {

using ndgrad::Var;

// Tape forward mirroring DenoiserModel::forward.
Var graph_forward(const std::vector<Var>& weights, const std::vector<Var>& biases,
                  const inr::ActivationParams& act, const Var& features) {
  Var z = features;
  for (size_t l = 0; l < weights.size(); ++l) {
    z = ndgrad::add(ndgrad::matmul(z, weights[l]), biases[l]);
    if (l + 1 == weights.size()) break;
    const int layer = static_cast<int>(l);
    switch (act.kind) {
      case inr::Activation::phi: {
        const Var t = ndgrad::add(ndgrad::mul(z, ndgrad::constant(act.a1)),
                                  ndgrad::constant(act.b1));
        const Var u = ndgrad::add(ndgrad::mul(z, ndgrad::constant(act.a2)),
                                  ndgrad::constant(act.b2));
        const Var envelope = ndgrad::exp(ndgrad::negate(ndgrad::square(t)));
        z = ndgrad::add(ndgrad::mul(envelope, ndgrad::sin(u)), ndgrad::sigmoid(t));
        break;
      }
      case inr::Activation::sine: {
        const double omega = layer == 0 ? act.sine_omega_first : 1.0;
        z = omega == 1.0 ? ndgrad::sin(z)
                         : ndgrad::sin(ndgrad::mul(z, ndgrad::constant(omega)));
        break;
      }
      case inr::Activation::relu:
        z = ndgrad::relu(z);
        break;
    }
  }
  return z;
}

ndgrad::Tensor value_targets(const Image& img) {
  const int c = img.channels();
  ndgrad::Tensor target({static_cast<int64_t>(img.height()) * img.width(), c});
  int64_t row = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int ch = 0; ch < c; ++ch) target.at(row, ch) = img.at(y, x, ch);
      ++row;
    }
  }
  return target;
}

}  // namespace

TrainResult train_single_shot(const Image& y, const TrainConfig& cfg,
                              inr::ActivationParams activation) {
  return train_single_shot(y, inr::ModelConfig::for_channels(y.channels(), activation, cfg.seed),
                           cfg);
}

TrainResult train_single_shot(const Image& y, const inr::ModelConfig& model_cfg,
                              const TrainConfig& cfg) {
  if (cfg.iterations < 0) throw std::invalid_argument("train_single_shot: negative iterations");
  if (cfg.noise_std <= 0.0) throw std::invalid_argument("train_single_shot: noise_std must be positive");
  if (y.channels() != model_cfg.output_dim || model_cfg.input_dim != 2 + y.channels()) {
    throw std::invalid_argument("train_single_shot: model dimensions do not match the image");
  }

  TrainResult result;
  result.model = inr::build_model(model_cfg);

  std::vector<Var> weights, biases, params;
  for (auto& layer : result.model.layers) {
    weights.push_back(ndgrad::leaf(layer.weight));
    biases.push_back(ndgrad::leaf(layer.bias));
    params.push_back(weights.back());
    params.push_back(biases.back());
  }
  ndgrad::Adam optimizer(params, {.lr = cfg.lr});

  const Var target = ndgrad::leaf(value_targets(y));
  Rng noise_seeds(cfg.seed);
  Image noisy;

  for (int i = 0; i < cfg.iterations; ++i) {
    try {
      if (i == 0 || cfg.resample_noise) {
        noisy = add_noise(y, cfg.noise_std, noise_seeds.next_u64());
      }
      const Var features = ndgrad::leaf(inr::image_features(noisy));
      const Var pred = graph_forward(weights, biases, result.model.config.activation, features);
      const Var loss = ndgrad::mean(ndgrad::square(ndgrad::sub(pred, target)));
      const double loss_value = loss->value[0];
      if (!std::isfinite(loss_value)) {
        throw std::runtime_error("loss is not finite");
      }
      result.losses.push_back(loss_value);
      ndgrad::backward(loss);
      optimizer.step();
    } catch (const std::exception& e) {
      throw std::runtime_error("train_single_shot: iteration " + std::to_string(i) +
                               " failed: " + e.what());
    }
  }

  for (size_t l = 0; l < result.model.layers.size(); ++l) {
    result.model.layers[l].weight = weights[l]->value;
    result.model.layers[l].bias = biases[l]->value;
  }

  if (!cfg.loss_log_path.empty()) {
    std::ofstream os(cfg.loss_log_path);
    if (!os) throw std::runtime_error("train_single_shot: cannot write " + cfg.loss_log_path);
    os << "iteration,mse\n";
    for (size_t i = 0; i < result.losses.size(); ++i) {
      os << i << "," << result.losses[i] << "\n";
    }
  }
  return result;
}

}  // namespace sspnp::train

#include "sspnp/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "sspnp/rng.hpp"

namespace sspnp::inr {

ModelConfig ModelConfig::for_channels(int channels, ActivationParams act, uint64_t seed) {
  ModelConfig cfg;
  cfg.input_dim = 2 + channels;
  cfg.output_dim = channels;
  cfg.activation = act;
  cfg.seed = seed;
  return cfg;
}

namespace {

double init_bound(const ModelConfig& cfg, int layer_index, int fan_in) {
  if (cfg.activation.kind == Activation::sine) {
    // First layer spans the input range; later layers compensate for the
    // frequency scaling so activations stay in the responsive regime.
    if (layer_index == 0) return 1.0 / fan_in;
    return std::sqrt(6.0 / fan_in);
  }
  return std::sqrt(1.0 / fan_in);
}

}  // namespace

DenoiserModel build_model(const ModelConfig& config) {
  if (config.input_dim <= 0 || config.hidden_dim <= 0 || config.output_dim <= 0 ||
      config.hidden_layers < 0) {
    throw std::invalid_argument("build_model: dimensions must be positive");
  }
  if (config.activation.kind == Activation::phi &&
      (config.activation.a1 == 0.0 || config.activation.a2 == 0.0)) {
    throw std::invalid_argument("build_model: phi activation needs a1 != 0 and a2 != 0");
  }

  DenoiserModel model;
  model.config = config;
  Rng rng(config.seed);

  std::vector<int> dims;
  dims.push_back(config.input_dim);
  for (int i = 0; i < config.hidden_layers; ++i) dims.push_back(config.hidden_dim);
  dims.push_back(config.output_dim);

  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    DenoiserModel::Layer layer;
    layer.weight = ndgrad::Tensor({in, out});
    layer.bias = ndgrad::Tensor({1, out});
    const double bound = init_bound(config, static_cast<int>(l), in);
    for (int64_t i = 0; i < layer.weight.numel(); ++i) {
      layer.weight[i] = rng.uniform(-bound, bound);
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

ndgrad::Tensor DenoiserModel::forward(const ndgrad::Tensor& features) const {
  if (features.rank() != 2 || features.dim(1) != config.input_dim) {
    throw std::invalid_argument("DenoiserModel::forward: expected [n," +
                                std::to_string(config.input_dim) + "] features, got " +
                                features.shape_string());
  }
  ndgrad::Tensor z = features;
  for (size_t l = 0; l < layers.size(); ++l) {
    ndgrad::Tensor next = ndgrad::matmul_values(z, layers[l].weight);
    const int64_t cols = next.dim(1);
    for (int64_t r = 0; r < next.dim(0); ++r) {
      for (int64_t c = 0; c < cols; ++c) next.at(r, c) += layers[l].bias[c];
    }
    const bool is_last = l + 1 == layers.size();
    if (!is_last) {
      for (double& v : next.raw()) {
        v = activate(v, config.activation, static_cast<int>(l));
      }
    }
    z = std::move(next);
  }
  return z;
}

ndgrad::Tensor image_features(const Image& img) {
  const int h = img.height(), w = img.width(), c = img.channels();
  ndgrad::Tensor features({static_cast<int64_t>(h) * w, 2 + c});
  int64_t row = 0;
  for (int y = 0; y < h; ++y) {
    const double py = h > 1 ? -1.0 + 2.0 * y / (h - 1) : 0.0;
    for (int x = 0; x < w; ++x) {
      const double px = w > 1 ? -1.0 + 2.0 * x / (w - 1) : 0.0;
      features.at(row, 0) = px;
      features.at(row, 1) = py;
      for (int ch = 0; ch < c; ++ch) features.at(row, 2 + ch) = img.at(y, x, ch);
      ++row;
    }
  }
  return features;
}

Image apply_denoiser(const DenoiserModel& model, const Image& img) {
  if (img.channels() != model.config.output_dim) {
    throw std::invalid_argument("apply_denoiser: image has " +
                                std::to_string(img.channels()) + " channels, model outputs " +
                                std::to_string(model.config.output_dim));
  }
  const ndgrad::Tensor out = model.forward(image_features(img));
  Image result(img.height(), img.width(), img.channels());
  int64_t row = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        const double v = out.at(row, c);
        result.at(y, x, c) = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      }
      ++row;
    }
  }
  return result;
}

namespace {

constexpr char kMagic[8] = {'S', 'S', 'P', 'N', 'P', 'M', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("model file truncated");
  return v;
}

}  // namespace

void save_model(const DenoiserModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_model: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod<int32_t>(os, static_cast<int32_t>(model.config.activation.kind));
  write_pod<int32_t>(os, model.config.input_dim);
  write_pod<int32_t>(os, model.config.hidden_dim);
  write_pod<int32_t>(os, model.config.hidden_layers);
  write_pod<int32_t>(os, model.config.output_dim);
  write_pod<double>(os, model.config.activation.a1);
  write_pod<double>(os, model.config.activation.b1);
  write_pod<double>(os, model.config.activation.a2);
  write_pod<double>(os, model.config.activation.b2);
  write_pod<double>(os, model.config.activation.sine_omega_first);
  write_pod<uint64_t>(os, model.config.seed);
  write_pod<int32_t>(os, static_cast<int32_t>(model.layers.size()));
  for (const auto& layer : model.layers) {
    write_pod<int32_t>(os, static_cast<int32_t>(layer.weight.dim(0)));
    write_pod<int32_t>(os, static_cast<int32_t>(layer.weight.dim(1)));
    os.write(reinterpret_cast<const char*>(layer.weight.data()),
             static_cast<std::streamsize>(layer.weight.numel() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(layer.bias.data()),
             static_cast<std::streamsize>(layer.bias.numel() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("save_model: write failed for " + path);
}

DenoiserModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_model: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("load_model: " + path + " is not a model file");
  }
  DenoiserModel model;
  model.config.activation.kind = static_cast<Activation>(read_pod<int32_t>(is));
  model.config.input_dim = read_pod<int32_t>(is);
  model.config.hidden_dim = read_pod<int32_t>(is);
  model.config.hidden_layers = read_pod<int32_t>(is);
  model.config.output_dim = read_pod<int32_t>(is);
  model.config.activation.a1 = read_pod<double>(is);
  model.config.activation.b1 = read_pod<double>(is);
  model.config.activation.a2 = read_pod<double>(is);
  model.config.activation.b2 = read_pod<double>(is);
  model.config.activation.sine_omega_first = read_pod<double>(is);
  model.config.seed = read_pod<uint64_t>(is);
  const int32_t n_layers = read_pod<int32_t>(is);
  for (int32_t l = 0; l < n_layers; ++l) {
    const int64_t rows = read_pod<int32_t>(is);
    const int64_t cols = read_pod<int32_t>(is);
    DenoiserModel::Layer layer;
    layer.weight = ndgrad::Tensor({rows, cols});
    layer.bias = ndgrad::Tensor({1, cols});
    is.read(reinterpret_cast<char*>(layer.weight.data()),
            static_cast<std::streamsize>(layer.weight.numel() * sizeof(double)));
    is.read(reinterpret_cast<char*>(layer.bias.data()),
            static_cast<std::streamsize>(layer.bias.numel() * sizeof(double)));
    if (!is) throw std::runtime_error("load_model: truncated layer data");
    model.layers.push_back(std::move(layer));
  }
  return model;
}

}  // namespace sspnp::inr

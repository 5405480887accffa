#include "sspnp/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace sspnp::ndgrad {

Adam::Adam(std::vector<Var> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    if (!p) throw std::invalid_argument("Adam: null parameter");
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p->grad_set) {
      throw std::logic_error("Adam::step: parameter is missing its gradient");
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& value = params_[i]->value;
    const Tensor& grad = params_[i]->grad;
    Tensor& m = m_[i];
    Tensor& v = v_[i];
    for (int64_t j = 0; j < value.numel(); ++j) {
      const double g = grad[j];
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      value[j] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
    params_[i]->clear_grad();
  }
}

}  // namespace sspnp::ndgrad

#include "sspnp/activation.hpp"

#include <cmath>
#include <stdexcept>

namespace sspnp::inr {

namespace {
double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
}  // namespace

double phi(double x, const ActivationParams& p) {
  const double t = p.a1 * x + p.b1;
  return std::exp(-t * t) * std::sin(p.a2 * x + p.b2) + logistic(t);
}

double phi_derivative(double x, const ActivationParams& p) {
  const double t = p.a1 * x + p.b1;
  const double envelope = std::exp(-t * t);
  const double s = logistic(t);
  return -2.0 * p.a1 * t * envelope * std::sin(p.a2 * x + p.b2) +
         p.a2 * envelope * std::cos(p.a2 * x + p.b2) + p.a1 * s * (1.0 - s);
}

double activate(double x, const ActivationParams& p, int layer_index) {
  switch (p.kind) {
    case Activation::phi:
      return phi(x, p);
    case Activation::sine:
      return std::sin((layer_index == 0 ? p.sine_omega_first : 1.0) * x);
    case Activation::relu:
      return x > 0.0 ? x : 0.0;
  }
  throw std::logic_error("activate: unknown kind");
}

double activate_derivative(double x, const ActivationParams& p, int layer_index) {
  switch (p.kind) {
    case Activation::phi:
      return phi_derivative(x, p);
    case Activation::sine: {
      const double w = layer_index == 0 ? p.sine_omega_first : 1.0;
      return w * std::cos(w * x);
    }
    case Activation::relu:
      return x > 0.0 ? 1.0 : 0.0;
  }
  throw std::logic_error("activate_derivative: unknown kind");
}

}  // namespace sspnp::inr

#pragma once

namespace sspnp::inr {

enum class Activation { phi, sine, relu };

// Coefficients of the Gabor-plus-sigmoid activation
//   phi(x) = exp(-(a1*x + b1)^2) * sin(a2*x + b2) + 1 / (exp(-(a1*x + b1)) + 1)
// The same four scalars are shared by every hidden unit; they are model
// hyperparameters, not trained weights. `sine_omega_first` is the frequency
// applied on the first hidden layer of the sine baseline (1 elsewhere).
struct ActivationParams {
  Activation kind = Activation::phi;
  double a1 = 2.0;
  double b1 = 0.0;
  double a2 = 10.0;
  double b2 = 0.0;
  double sine_omega_first = 30.0;
};

double phi(double x, const ActivationParams& p);

// Closed-form derivative of phi; total for all finite x.
double phi_derivative(double x, const ActivationParams& p);

// Activation for a given hidden layer (the sine baseline scales the first
// layer's argument by sine_omega_first).
double activate(double x, const ActivationParams& p, int layer_index);
double activate_derivative(double x, const ActivationParams& p, int layer_index);

}  // namespace sspnp::inr

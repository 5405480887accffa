#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sspnp/tensor.hpp"

namespace sspnp::ndgrad {

// One node of the define-by-run tape. `backward_rule` consumes this node's
// gradient and accumulates into the parents; the tape is rebuilt on every
// forward pass, so nodes never outlive one training step except for leaves.
struct Node {
  explicit Node(Tensor v) : value(std::move(v)) {}

  Tensor value;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(const Node&)> backward_rule;  // empty for leaves
  Tensor grad;
  bool grad_set = false;

  void accumulate_grad(const Tensor& g);
  void clear_grad() { grad = Tensor(); grad_set = false; }
};

using Var = std::shared_ptr<Node>;

Var leaf(Tensor value);
Var constant(double value);

// Elementwise ops broadcast their operands (trailing-dim alignment, a
// dimension must match or be 1) by inserting explicit broadcast nodes.
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);

Var matmul(const Var& a, const Var& b);

Var exp(const Var& x);
Var sin(const Var& x);
Var sigmoid(const Var& x);
Var negate(const Var& x);
Var square(const Var& x);
Var relu(const Var& x);

// Full reduction to a one-element tensor.
Var mean(const Var& x);

Var concat(const std::vector<Var>& parts, int axis);
Var broadcast_to(const Var& x, const std::vector<int64_t>& shape);

// Reverse pass from a scalar root; gradients from multiple paths sum.
void backward(const Var& root);

}  // namespace sspnp::ndgrad

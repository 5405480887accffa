#include "sspnp/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace sspnp::ndgrad {

namespace {

Var make_node(Tensor value, std::vector<Var> parents,
              std::function<void(const Node&)> rule, const char* op_name) {
  require_finite(value, op_name);
  auto node = std::make_shared<Node>(std::move(value));
  node->parents = std::move(parents);
  node->backward_rule = std::move(rule);
  return node;
}

// Left-pad a shape with 1s to the target rank.
std::vector<int64_t> pad_shape(const std::vector<int64_t>& shape, size_t rank) {
  std::vector<int64_t> out(rank, 1);
  std::copy(shape.begin(), shape.end(), out.begin() + (rank - shape.size()));
  return out;
}

std::vector<int64_t> broadcast_result_shape(const std::vector<int64_t>& a,
                                            const std::vector<int64_t>& b) {
  const size_t rank = std::max(a.size(), b.size());
  auto pa = pad_shape(a, rank);
  auto pb = pad_shape(b, rank);
  std::vector<int64_t> out(rank);
  for (size_t i = 0; i < rank; ++i) {
    if (pa[i] == pb[i] || pa[i] == 1 || pb[i] == 1) {
      out[i] = std::max(pa[i], pb[i]);
    } else {
      throw std::invalid_argument("broadcast: incompatible dimensions");
    }
  }
  return out;
}

Tensor expand(const Tensor& src, const std::vector<int64_t>& target) {
  if (target.size() > 2) {
    throw std::invalid_argument("broadcast: only ranks 1 and 2 are supported");
  }
  auto from = pad_shape(src.shape(), target.size());
  Tensor out(target);
  if (target.size() == 1) {
    for (int64_t i = 0; i < target[0]; ++i) out[i] = src[from[0] == 1 ? 0 : i];
    return out;
  }
  for (int64_t r = 0; r < target[0]; ++r) {
    const int64_t sr = from[0] == 1 ? 0 : r;
    for (int64_t c = 0; c < target[1]; ++c) {
      const int64_t sc = from[1] == 1 ? 0 : c;
      out.at(r, c) = src[sr * from[1] + sc];
    }
  }
  return out;
}

// Sum `g` back down to `shape` along the dimensions that were expanded.
Tensor reduce_to(const Tensor& g, const std::vector<int64_t>& shape) {
  auto from = pad_shape(shape, g.shape().size());
  Tensor out(shape, 0.0);
  if (g.rank() == 1) {
    for (int64_t i = 0; i < g.numel(); ++i) out[from[0] == 1 ? 0 : i] += g[i];
    return out;
  }
  for (int64_t r = 0; r < g.dim(0); ++r) {
    const int64_t sr = from[0] == 1 ? 0 : r;
    for (int64_t c = 0; c < g.dim(1); ++c) {
      const int64_t sc = from[1] == 1 ? 0 : c;
      out[sr * from[1] + sc] += g.at(r, c);
    }
  }
  return out;
}

Var broadcast_if_needed(const Var& v, const std::vector<int64_t>& shape) {
  if (v->value.shape() == shape) return v;
  return broadcast_to(v, shape);
}

using BinaryFn = double (*)(double, double);

Var elementwise_binary(const Var& a0, const Var& b0, BinaryFn fn,
                       std::function<void(const Node&, const Var&, const Var&)> rule,
                       const char* op_name) {
  const auto shape = broadcast_result_shape(a0->value.shape(), b0->value.shape());
  Var a = broadcast_if_needed(a0, shape);
  Var b = broadcast_if_needed(b0, shape);
  Tensor out(shape);
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = fn(a->value[i], b->value[i]);
  return make_node(std::move(out), {a, b},
                   [rule = std::move(rule), a, b](const Node& self) { rule(self, a, b); },
                   op_name);
}

Var elementwise_unary(const Var& x, double (*fn)(double),
                      std::function<void(const Node&, const Var&)> rule,
                      const char* op_name) {
  Tensor out(x->value.shape());
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = fn(x->value[i]);
  return make_node(std::move(out), {x},
                   [rule = std::move(rule), x](const Node& self) { rule(self, x); },
                   op_name);
}

}  // namespace

void Node::accumulate_grad(const Tensor& g) {
  if (!g.same_shape(value)) {
    throw std::invalid_argument("gradient shape " + g.shape_string() +
                                " does not match value shape " + value.shape_string());
  }
  if (!grad_set) {
    grad = g;
    grad_set = true;
  } else {
    grad.add_in_place(g);
  }
}

Var leaf(Tensor value) {
  require_finite(value, "leaf");
  return std::make_shared<Node>(std::move(value));
}

Var constant(double value) { return leaf(Tensor::scalar(value)); }

Var add(const Var& a, const Var& b) {
  return elementwise_binary(
      a, b, [](double x, double y) { return x + y; },
      [](const Node& self, const Var& pa, const Var& pb) {
        pa->accumulate_grad(self.grad);
        pb->accumulate_grad(self.grad);
      },
      "add");
}

Var sub(const Var& a, const Var& b) {
  return elementwise_binary(
      a, b, [](double x, double y) { return x - y; },
      [](const Node& self, const Var& pa, const Var& pb) {
        pa->accumulate_grad(self.grad);
        Tensor neg = self.grad;
        for (double& v : neg.raw()) v = -v;
        pb->accumulate_grad(neg);
      },
      "sub");
}

Var mul(const Var& a, const Var& b) {
  return elementwise_binary(
      a, b, [](double x, double y) { return x * y; },
      [](const Node& self, const Var& pa, const Var& pb) {
        Tensor ga(self.grad.shape());
        Tensor gb(self.grad.shape());
        for (int64_t i = 0; i < self.grad.numel(); ++i) {
          ga[i] = self.grad[i] * pb->value[i];
          gb[i] = self.grad[i] * pa->value[i];
        }
        pa->accumulate_grad(ga);
        pb->accumulate_grad(gb);
      },
      "mul");
}

Var matmul(const Var& a, const Var& b) {
  Tensor out = matmul_values(a->value, b->value);
  return make_node(std::move(out), {a, b},
                   [a, b](const Node& self) {
                     // dA = g * B^T, dB = A^T * g
                     a->accumulate_grad(matmul_values(self.grad, b->value, false, true));
                     b->accumulate_grad(matmul_values(a->value, self.grad, true, false));
                   },
                   "matmul");
}

Var exp(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return std::exp(v); },
      [](const Node& self, const Var& px) {
        Tensor g(self.grad.shape());
        for (int64_t i = 0; i < g.numel(); ++i) g[i] = self.grad[i] * self.value[i];
        px->accumulate_grad(g);
      },
      "exp");
}

Var sin(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return std::sin(v); },
      [](const Node& self, const Var& px) {
        Tensor g(self.grad.shape());
        for (int64_t i = 0; i < g.numel(); ++i) {
          g[i] = self.grad[i] * std::cos(px->value[i]);
        }
        px->accumulate_grad(g);
      },
      "sin");
}

Var sigmoid(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
      [](const Node& self, const Var& px) {
        Tensor g(self.grad.shape());
        for (int64_t i = 0; i < g.numel(); ++i) {
          const double s = self.value[i];
          g[i] = self.grad[i] * s * (1.0 - s);
        }
        px->accumulate_grad(g);
      },
      "sigmoid");
}

Var negate(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return -v; },
      [](const Node& self, const Var& px) {
        Tensor g = self.grad;
        for (double& v : g.raw()) v = -v;
        px->accumulate_grad(g);
      },
      "negate");
}

Var square(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return v * v; },
      [](const Node& self, const Var& px) {
        Tensor g(self.grad.shape());
        for (int64_t i = 0; i < g.numel(); ++i) {
          g[i] = self.grad[i] * 2.0 * px->value[i];
        }
        px->accumulate_grad(g);
      },
      "square");
}

Var relu(const Var& x) {
  return elementwise_unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](const Node& self, const Var& px) {
        Tensor g(self.grad.shape());
        for (int64_t i = 0; i < g.numel(); ++i) {
          g[i] = px->value[i] > 0.0 ? self.grad[i] : 0.0;
        }
        px->accumulate_grad(g);
      },
      "relu");
}

Var mean(const Var& x) {
  const double n = static_cast<double>(x->value.numel());
  double acc = 0.0;
  for (int64_t i = 0; i < x->value.numel(); ++i) acc += x->value[i];
  return make_node(Tensor::scalar(acc / n), {x},
                   [x, n](const Node& self) {
                     Tensor g(x->value.shape(), self.grad[0] / n);
                     x->accumulate_grad(g);
                   },
                   "mean");
}

Var concat(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  const int rank = parts[0]->value.rank();
  if (axis < 0 || axis >= rank) throw std::invalid_argument("concat: bad axis");

  if (rank == 1) {
    int64_t total = 0;
    for (const auto& p : parts) total += p->value.numel();
    Tensor out({total});
    int64_t off = 0;
    std::vector<int64_t> offsets;
    for (const auto& p : parts) {
      offsets.push_back(off);
      for (int64_t i = 0; i < p->value.numel(); ++i) out[off + i] = p->value[i];
      off += p->value.numel();
    }
    return make_node(std::move(out), parts,
                     [parts, offsets](const Node& self) {
                       for (size_t k = 0; k < parts.size(); ++k) {
                         Tensor g(parts[k]->value.shape());
                         for (int64_t i = 0; i < g.numel(); ++i) {
                           g[i] = self.grad[offsets[k] + i];
                         }
                         parts[k]->accumulate_grad(g);
                       }
                     },
                     "concat");
  }

  if (rank != 2) throw std::invalid_argument("concat: only ranks 1 and 2");
  const int64_t other = parts[0]->value.dim(1 - axis);
  int64_t total = 0;
  for (const auto& p : parts) {
    if (p->value.rank() != 2 || p->value.dim(1 - axis) != other) {
      throw std::invalid_argument("concat: inputs disagree off the concat axis");
    }
    total += p->value.dim(axis);
  }
  const int64_t rows = axis == 0 ? total : other;
  const int64_t cols = axis == 0 ? other : total;
  Tensor out({rows, cols});
  std::vector<int64_t> offsets;
  int64_t off = 0;
  for (const auto& p : parts) {
    offsets.push_back(off);
    const int64_t pr = p->value.dim(0), pc = p->value.dim(1);
    for (int64_t r = 0; r < pr; ++r) {
      for (int64_t c = 0; c < pc; ++c) {
        if (axis == 0) {
          out.at(off + r, c) = p->value.at(r, c);
        } else {
          out.at(r, off + c) = p->value.at(r, c);
        }
      }
    }
    off += p->value.dim(axis);
  }
  return make_node(std::move(out), parts,
                   [parts, offsets, axis](const Node& self) {
                     for (size_t k = 0; k < parts.size(); ++k) {
                       const int64_t pr = parts[k]->value.dim(0);
                       const int64_t pc = parts[k]->value.dim(1);
                       Tensor g({pr, pc});
                       for (int64_t r = 0; r < pr; ++r) {
                         for (int64_t c = 0; c < pc; ++c) {
                           g.at(r, c) = axis == 0 ? self.grad.at(offsets[k] + r, c)
                                                  : self.grad.at(r, offsets[k] + c);
                         }
                       }
                       parts[k]->accumulate_grad(g);
                     }
                   },
                   "concat");
}

Var broadcast_to(const Var& x, const std::vector<int64_t>& shape) {
  // Validates compatibility as a side effect.
  broadcast_result_shape(x->value.shape(), shape);
  Tensor out = expand(x->value, shape);
  return make_node(std::move(out), {x},
                   [x](const Node& self) {
                     x->accumulate_grad(reduce_to(self.grad, x->value.shape()));
                   },
                   "broadcast");
}

void backward(const Var& root) {
  if (!root) throw std::invalid_argument("backward: null root");
  if (root->value.numel() != 1) {
    throw std::invalid_argument("backward: root must be scalar-valued, got shape " +
                                root->value.shape_string());
  }

  // Iterative post-order DFS for a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->accumulate_grad(Tensor(root->value.shape(), 1.0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backward_rule && node->grad_set) node->backward_rule(*node);
  }
}

}  // namespace sspnp::ndgrad

#include "sspnp/tensor.hpp"

#include <cmath>

namespace sspnp::ndgrad {

namespace {

int64_t product(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

void validate_shape(const std::vector<int64_t>& shape) {
  if (shape.empty()) {
    throw std::invalid_argument("Tensor: empty shape");
  }
  for (int64_t d : shape) {
    if (d <= 0) throw std::invalid_argument("Tensor: dimensions must be positive");
  }
}

}  // namespace

Tensor::Tensor(std::vector<int64_t> shape, double fill) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(static_cast<size_t>(product(shape_)), fill);
}

Tensor::Tensor(std::vector<int64_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (product(shape_) != static_cast<int64_t>(data_.size())) {
    throw std::invalid_argument("Tensor: data length does not match shape");
  }
}

std::string Tensor::shape_string() const {
  std::string s = "(";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + ")";
}

void Tensor::add_in_place(const Tensor& other) {
  if (!same_shape(other)) {
    throw std::invalid_argument("Tensor::add_in_place: shape mismatch " +
                                shape_string() + " vs " + other.shape_string());
  }
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void require_finite(const Tensor& t, const char* where) {
  for (double v : t.raw()) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string("non-finite value produced by ") + where);
    }
  }
}

Tensor matmul_values(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw std::invalid_argument("matmul: both operands must be rank 2");
  }
  const int64_t m = trans_a ? a.dim(1) : a.dim(0);
  const int64_t k = trans_a ? a.dim(0) : a.dim(1);
  const int64_t kb = trans_b ? b.dim(1) : b.dim(0);
  const int64_t n = trans_b ? b.dim(0) : b.dim(1);
  if (k != kb) {
    throw std::invalid_argument("matmul: inner dimensions differ: " +
                                a.shape_string() + " x " + b.shape_string());
  }

  Tensor c({m, n}, 0.0);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  const int64_t lda = a.dim(1);
  const int64_t ldb = b.dim(1);

  // i-k-j ordering keeps the inner loop contiguous in B and C.
  for (int64_t i = 0; i < m; ++i) {
    double* crow = pc + i * n;
    for (int64_t kk = 0; kk < k; ++kk) {
      const double av = trans_a ? pa[kk * lda + i] : pa[i * lda + kk];
      if (av == 0.0) continue;
      if (!trans_b) {
        const double* brow = pb + kk * ldb;
        for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      } else {
        for (int64_t j = 0; j < n; ++j) crow[j] += av * pb[j * ldb + kk];
      }
    }
  }
  return c;
}

}  // namespace sspnp::ndgrad

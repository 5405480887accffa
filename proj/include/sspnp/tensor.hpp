#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sspnp::ndgrad {

// Dense n-dimensional array of 64-bit reals, row-major. The unit of all
// graph computation; in practice ranks 1 and 2 are what the network uses.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape, double fill = 0.0);
  Tensor(std::vector<int64_t> shape, std::vector<double> data);

  static Tensor scalar(double v) { return Tensor({1}, {v}); }
  static Tensor zeros_like(const Tensor& t) { return Tensor(t.shape()); }

  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }

  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  // Rank-2 accessor.
  double& at(int64_t r, int64_t c) { return data_[static_cast<size_t>(r * shape_[1] + c)]; }
  double at(int64_t r, int64_t c) const { return data_[static_cast<size_t>(r * shape_[1] + c)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_string() const;

  void add_in_place(const Tensor& other);

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

// Throws if any element is NaN or Inf; `where` names the producing op.
void require_finite(const Tensor& t, const char* where);

// C = op(A) * op(B) with optional transposes; shapes are validated.
Tensor matmul_values(const Tensor& a, const Tensor& b, bool trans_a = false,
                     bool trans_b = false);

}  // namespace sspnp::ndgrad

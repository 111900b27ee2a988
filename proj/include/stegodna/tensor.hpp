#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace stegodna {

// Row-major dense tensor of 64-bit reals.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> v)
      : shape(std::move(s)), values(std::move(v)) {}

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor identity(std::size_t n);

  std::size_t size() const { return values.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  void fill(double v) { values.assign(values.size(), v); }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  bool operator==(const Tensor&) const = default;
};

std::size_t shape_numel(const std::vector<std::size_t>& shape);

// y += M x  (M is rows x cols, x has cols entries, y has rows entries)
void matvec_add(const Tensor& m, const double* x, double* y);
// y += M^T x  (x has rows entries, y has cols entries)
void matvec_transpose_add(const Tensor& m, const double* x, double* y);
// M += a b^T
void outer_add(Tensor& m, const double* a, const double* b);

}  // namespace stegodna

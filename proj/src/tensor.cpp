#include "stegodna/tensor.hpp"

#include <stdexcept>

namespace stegodna {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  Tensor t;
  t.values.assign(shape_numel(shape), 0.0);
  t.shape = std::move(shape);
  return t;
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t = zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

void matvec_add(const Tensor& m, const double* x, double* y) {
  const std::size_t r = m.rows(), c = m.cols();
  const double* w = m.values.data();
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += w[i * c + j] * x[j];
    y[i] += acc;
  }
}

void matvec_transpose_add(const Tensor& m, const double* x, double* y) {
  const std::size_t r = m.rows(), c = m.cols();
  const double* w = m.values.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < c; ++j) y[j] += w[i * c + j] * xi;
  }
}

void outer_add(Tensor& m, const double* a, const double* b) {
  const std::size_t r = m.rows(), c = m.cols();
  double* w = m.values.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double ai = a[i];
    for (std::size_t j = 0; j < c; ++j) w[i * c + j] += ai * b[j];
  }
}

}  // namespace stegodna

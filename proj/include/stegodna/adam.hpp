#pragma once

#include <cstddef>
#include <vector>

#include "stegodna/tensor.hpp"

namespace stegodna {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected update of one parameter tensor; t is 1-based.
void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
                 std::size_t t, const AdamConfig& cfg);

// Moment state for a fixed parameter list.
struct AdamState {
  std::vector<Tensor> m, v;
  std::size_t t = 0;

  void init_like(const std::vector<Tensor*>& params);
};

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads,
               AdamState& state, const AdamConfig& cfg);

}  // namespace stegodna

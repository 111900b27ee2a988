#pragma once

#include <functional>
#include <vector>

#include "stegodna/tensor.hpp"

namespace stegodna {

// Central-difference check of analytic gradients. `loss` must be a pure
// function of the current parameter values; `params` and `analytic` pair up
// index-wise. Returns max over parameters of
// |g_analytic - g_numeric| / max(|g_analytic|, |g_numeric|, 1e-8).
double max_relative_gradient_error(const std::vector<Tensor*>& params,
                                   const std::vector<const Tensor*>& analytic,
                                   const std::function<double()>& loss,
                                   double step = 1e-5);

}  // namespace stegodna

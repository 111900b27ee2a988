#include "stegodna/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace stegodna {

double max_relative_gradient_error(const std::vector<Tensor*>& params,
                                   const std::vector<const Tensor*>& analytic,
                                   const std::function<double()>& loss,
                                   double step) {
  if (params.size() != analytic.size()) {
    throw std::invalid_argument("gradient check: parameter/gradient list mismatch");
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& tensor = *params[p];
    const Tensor& grad = *analytic[p];
    if (tensor.size() != grad.size()) {
      throw std::invalid_argument("gradient check: tensor/gradient shape mismatch");
    }
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double saved = tensor[i];
      tensor[i] = saved + step;
      const double up = loss();
      tensor[i] = saved - step;
      const double down = loss();
      tensor[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw std::runtime_error("gradient check: non-finite loss");
      }
      const double numeric = (up - down) / (2.0 * step);
      const double ga = grad[i];
      const double err = std::abs(ga - numeric) /
                         std::max({std::abs(ga), std::abs(numeric), 1e-8});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace stegodna

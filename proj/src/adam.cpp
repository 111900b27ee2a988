#include "stegodna/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace stegodna {

void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
                 std::size_t t, const AdamConfig& cfg) {
  if (param.size() != grad.size() || param.size() != m.size() || param.size() != v.size()) {
    throw std::invalid_argument("adam_update: mismatched tensor sizes");
  }
  if (t == 0) throw std::invalid_argument("adam_update: t must be >= 1");
  const double m_corr = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double v_corr = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m[i] / m_corr;
    const double v_hat = v[i] / v_corr;
    param[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

void AdamState::init_like(const std::vector<Tensor*>& params) {
  m.clear();
  v.clear();
  for (const Tensor* p : params) {
    m.push_back(Tensor::zeros(p->shape));
    v.push_back(Tensor::zeros(p->shape));
  }
  t = 0;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads,
               AdamState& state, const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: mismatched parameter lists");
  }
  ++state.t;
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_update(*params[i], *grads[i], state.m[i], state.v[i], state.t, cfg);
  }
}

}  // namespace stegodna

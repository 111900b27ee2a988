#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stegodna/tensor.hpp"

namespace stegodna {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Full LSTM: forget gate, and peephole connections on the input, forget
// and output gates. The candidate gate has no peephole.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;

  Tensor w_i, w_f, w_g, w_o;  // hidden x input
  Tensor u_i, u_f, u_g, u_o;  // hidden x hidden
  Tensor p_i, p_f, p_o;       // hidden (peepholes)
  Tensor b_i, b_f, b_g, b_o;  // hidden

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);
  static LstmParams glorot(std::size_t input_dim, std::size_t hidden_dim,
                           std::mt19937_64& rng);

  // Fixed enumeration order; used by the optimizer, checkpoints and
  // gradient checks.
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  static const std::vector<std::string>& tensor_names();

  bool all_finite() const;
};

// One step: gates i,f = sigma(Wx + Uh + p.c_prev + b); candidate
// g = tanh(Wx + Uh + b); c = f.c_prev + i.g; o = sigma(Wx + Uh + p.c + b);
// h = o.tanh(c).
void lstm_step(const LstmParams& params, const double* x, const double* h_prev,
               const double* c_prev, double* h_out, double* c_out);

// Per-step activations cached by the forward pass for BPTT.
struct LstmTrace {
  std::size_t steps = 0;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::vector<double> x;                    // steps x input_dim
  std::vector<double> i, f, g, o, c, tc, h; // steps x hidden_dim (tc = tanh c)

  const double* h_at(std::size_t t) const { return h.data() + t * hidden_dim; }
  const double* h_final() const { return h_at(steps - 1); }
};

void lstm_forward(const LstmParams& params, const double* x, std::size_t steps,
                  LstmTrace& trace);

// Backpropagation through time. `dh` carries the incoming gradient on every
// h_t (steps x hidden). Parameter gradients accumulate into `grad`; when
// `dx` is non-null the gradient on the inputs is written there
// (steps x input, overwritten).
void lstm_backward(const LstmParams& params, const LstmTrace& trace,
                   const std::vector<double>& dh, LstmParams& grad,
                   std::vector<double>* dx);

}  // namespace stegodna

#include "stegodna/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "stegodna/init.hpp"

namespace stegodna {

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  for (Tensor* w : {&p.w_i, &p.w_f, &p.w_g, &p.w_o}) *w = Tensor::zeros({hidden_dim, input_dim});
  for (Tensor* u : {&p.u_i, &p.u_f, &p.u_g, &p.u_o}) *u = Tensor::zeros({hidden_dim, hidden_dim});
  for (Tensor* v : {&p.p_i, &p.p_f, &p.p_o}) *v = Tensor::zeros({hidden_dim});
  for (Tensor* b : {&p.b_i, &p.b_f, &p.b_g, &p.b_o}) *b = Tensor::zeros({hidden_dim});
  return p;
}

LstmParams LstmParams::glorot(std::size_t input_dim, std::size_t hidden_dim,
                              std::mt19937_64& rng) {
  LstmParams p = zeros(input_dim, hidden_dim);
  for (Tensor* w : {&p.w_i, &p.w_f, &p.w_g, &p.w_o}) {
    *w = glorot_tensor({hidden_dim, input_dim}, input_dim, hidden_dim, rng);
  }
  for (Tensor* u : {&p.u_i, &p.u_f, &p.u_g, &p.u_o}) {
    *u = glorot_tensor({hidden_dim, hidden_dim}, hidden_dim, hidden_dim, rng);
  }
  for (Tensor* v : {&p.p_i, &p.p_f, &p.p_o}) {
    *v = glorot_tensor({hidden_dim}, hidden_dim, hidden_dim, rng);
  }
  // Biases start at zero; the forget gate starts open so early gradients
  // reach across timesteps.
  p.b_f.fill(1.0);
  return p;
}

std::vector<Tensor*> LstmParams::tensors() {
  return {&w_i, &w_f, &w_g, &w_o, &u_i, &u_f, &u_g, &u_o,
          &p_i, &p_f, &p_o, &b_i, &b_f, &b_g, &b_o};
}

std::vector<const Tensor*> LstmParams::tensors() const {
  return {&w_i, &w_f, &w_g, &w_o, &u_i, &u_f, &u_g, &u_o,
          &p_i, &p_f, &p_o, &b_i, &b_f, &b_g, &b_o};
}

const std::vector<std::string>& LstmParams::tensor_names() {
  static const std::vector<std::string> names = {
      "w_i", "w_f", "w_g", "w_o", "u_i", "u_f", "u_g", "u_o",
      "p_i", "p_f", "p_o", "b_i", "b_f", "b_g", "b_o"};
  return names;
}

bool LstmParams::all_finite() const {
  for (const Tensor* t : tensors()) {
    if (!t->all_finite()) return false;
  }
  return true;
}

namespace {

void gate_preactivations(const LstmParams& p, const double* x, const double* h_prev,
                         const double* c_prev, double* ai, double* af, double* ag,
                         double* ao_partial) {
  const std::size_t d = p.hidden_dim;
  for (std::size_t k = 0; k < d; ++k) {
    ai[k] = p.b_i[k] + p.p_i[k] * c_prev[k];
    af[k] = p.b_f[k] + p.p_f[k] * c_prev[k];
    ag[k] = p.b_g[k];
    ao_partial[k] = p.b_o[k];  // peephole on c_t added after c_t is known
  }
  matvec_add(p.w_i, x, ai);
  matvec_add(p.w_f, x, af);
  matvec_add(p.w_g, x, ag);
  matvec_add(p.w_o, x, ao_partial);
  matvec_add(p.u_i, h_prev, ai);
  matvec_add(p.u_f, h_prev, af);
  matvec_add(p.u_g, h_prev, ag);
  matvec_add(p.u_o, h_prev, ao_partial);
}

}  // namespace

void lstm_step(const LstmParams& p, const double* x, const double* h_prev,
               const double* c_prev, double* h_out, double* c_out) {
  const std::size_t d = p.hidden_dim;
  std::vector<double> ai(d), af(d), ag(d), ao(d);
  gate_preactivations(p, x, h_prev, c_prev, ai.data(), af.data(), ag.data(), ao.data());
  for (std::size_t k = 0; k < d; ++k) {
    const double i = logistic(ai[k]);
    const double f = logistic(af[k]);
    const double g = std::tanh(ag[k]);
    const double c = f * c_prev[k] + i * g;
    const double o = logistic(ao[k] + p.p_o[k] * c);
    c_out[k] = c;
    h_out[k] = o * std::tanh(c);
  }
}

void lstm_forward(const LstmParams& p, const double* x, std::size_t steps,
                  LstmTrace& trace) {
  const std::size_t d = p.hidden_dim;
  const std::size_t in = p.input_dim;
  trace.steps = steps;
  trace.input_dim = in;
  trace.hidden_dim = d;
  trace.x.assign(x, x + steps * in);
  for (auto* v : {&trace.i, &trace.f, &trace.g, &trace.o, &trace.c, &trace.tc, &trace.h}) {
    v->assign(steps * d, 0.0);
  }

  std::vector<double> zero(d, 0.0);
  std::vector<double> ai(d), af(d), ag(d), ao(d);
  for (std::size_t t = 0; t < steps; ++t) {
    const double* xt = x + t * in;
    const double* h_prev = t == 0 ? zero.data() : trace.h.data() + (t - 1) * d;
    const double* c_prev = t == 0 ? zero.data() : trace.c.data() + (t - 1) * d;
    gate_preactivations(p, xt, h_prev, c_prev, ai.data(), af.data(), ag.data(), ao.data());
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t idx = t * d + k;
      trace.i[idx] = logistic(ai[k]);
      trace.f[idx] = logistic(af[k]);
      trace.g[idx] = std::tanh(ag[k]);
      trace.c[idx] = trace.f[idx] * c_prev[k] + trace.i[idx] * trace.g[idx];
      trace.o[idx] = logistic(ao[k] + p.p_o[k] * trace.c[idx]);
      trace.tc[idx] = std::tanh(trace.c[idx]);
      trace.h[idx] = trace.o[idx] * trace.tc[idx];
    }
  }
}

void lstm_backward(const LstmParams& p, const LstmTrace& trace,
                   const std::vector<double>& dh, LstmParams& grad,
                   std::vector<double>* dx) {
  const std::size_t d = p.hidden_dim;
  const std::size_t in = p.input_dim;
  const std::size_t steps = trace.steps;
  if (dh.size() != steps * d) throw std::invalid_argument("lstm_backward: bad dh size");
  if (dx) dx->assign(steps * in, 0.0);

  std::vector<double> zero(d, 0.0);
  std::vector<double> dh_next(d, 0.0);  // gradient flowing into h_t from t+1
  std::vector<double> dc_next(d, 0.0);  // gradient flowing into c_t from t+1
  std::vector<double> dai(d), daf(d), dag(d), dao(d);

  for (std::size_t t = steps; t-- > 0;) {
    const double* h_prev = t == 0 ? zero.data() : trace.h.data() + (t - 1) * d;
    const double* c_prev = t == 0 ? zero.data() : trace.c.data() + (t - 1) * d;
    const double* xt = trace.x.data() + t * in;

    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t idx = t * d + k;
      const double i = trace.i[idx], f = trace.f[idx], g = trace.g[idx];
      const double o = trace.o[idx], c = trace.c[idx], tc = trace.tc[idx];

      const double dht = dh[idx] + dh_next[k];
      const double do_ = dht * tc;
      dao[k] = do_ * o * (1.0 - o);
      // c_t feeds h_t through tanh, c_{t+1} through the recurrence, and
      // the output gate through its peephole.
      double dc = dht * o * (1.0 - tc * tc) + dc_next[k] + dao[k] * p.p_o[k];
      const double di = dc * g;
      const double df = dc * c_prev[k];
      const double dg = dc * i;
      dai[k] = di * i * (1.0 - i);
      daf[k] = df * f * (1.0 - f);
      dag[k] = dg * (1.0 - g * g);
      dc_next[k] = dc * f + dai[k] * p.p_i[k] + daf[k] * p.p_f[k];

      grad.b_i[k] += dai[k];
      grad.b_f[k] += daf[k];
      grad.b_g[k] += dag[k];
      grad.b_o[k] += dao[k];
      grad.p_i[k] += dai[k] * c_prev[k];
      grad.p_f[k] += daf[k] * c_prev[k];
      grad.p_o[k] += dao[k] * c;
    }

    outer_add(grad.w_i, dai.data(), xt);
    outer_add(grad.w_f, daf.data(), xt);
    outer_add(grad.w_g, dag.data(), xt);
    outer_add(grad.w_o, dao.data(), xt);
    outer_add(grad.u_i, dai.data(), h_prev);
    outer_add(grad.u_f, daf.data(), h_prev);
    outer_add(grad.u_g, dag.data(), h_prev);
    outer_add(grad.u_o, dao.data(), h_prev);

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    matvec_transpose_add(p.u_i, dai.data(), dh_next.data());
    matvec_transpose_add(p.u_f, daf.data(), dh_next.data());
    matvec_transpose_add(p.u_g, dag.data(), dh_next.data());
    matvec_transpose_add(p.u_o, dao.data(), dh_next.data());

    if (dx) {
      double* dxt = dx->data() + t * in;
      matvec_transpose_add(p.w_i, dai.data(), dxt);
      matvec_transpose_add(p.w_f, daf.data(), dxt);
      matvec_transpose_add(p.w_g, dag.data(), dxt);
      matvec_transpose_add(p.w_o, dao.data(), dxt);
    }
  }
}

}  // namespace stegodna

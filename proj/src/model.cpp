#include "stegodna/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "stegodna/init.hpp"
#include "stegodna/rng.hpp"

namespace stegodna {

namespace {

constexpr double kBnEpsilon = 1e-5;
constexpr double kBnMomentum = 0.1;
constexpr double kProbClamp = 1e-12;
constexpr int kModelFormatVersion = 1;

double clamp_prob(double p) {
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

}  // namespace

TrainConfig TrainConfig::paper_scale() {
  TrainConfig cfg;
  cfg.hidden_units = 60;
  cfg.batch_size = 100;
  cfg.ae_epochs = 50;
  cfg.clf_epochs = 100;
  return cfg;
}

void TrainConfig::validate() const {
  if (hidden_units == 0 || batch_size == 0 || stacked_layers == 0) {
    throw std::invalid_argument("hidden_units, batch_size and stacked_layers must be positive");
  }
  if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
  if (adam_beta1 <= 0.0 || adam_beta1 >= 1.0 || adam_beta2 <= 0.0 || adam_beta2 >= 1.0) {
    throw std::invalid_argument("adam betas must lie in (0, 1)");
  }
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return nlohmann::json{{"ae_epochs", cfg.ae_epochs},
                        {"clf_epochs", cfg.clf_epochs},
                        {"hidden_units", cfg.hidden_units},
                        {"batch_size", cfg.batch_size},
                        {"learning_rate", cfg.learning_rate},
                        {"adam_beta1", cfg.adam_beta1},
                        {"adam_beta2", cfg.adam_beta2},
                        {"adam_epsilon", cfg.adam_epsilon},
                        {"stacked_layers", cfg.stacked_layers},
                        {"mean_pool", cfg.mean_pool},
                        {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.ae_epochs = j.value("ae_epochs", cfg.ae_epochs);
  cfg.clf_epochs = j.value("clf_epochs", cfg.clf_epochs);
  cfg.hidden_units = j.value("hidden_units", cfg.hidden_units);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.adam_beta1 = j.value("adam_beta1", cfg.adam_beta1);
  cfg.adam_beta2 = j.value("adam_beta2", cfg.adam_beta2);
  cfg.adam_epsilon = j.value("adam_epsilon", cfg.adam_epsilon);
  cfg.stacked_layers = j.value("stacked_layers", cfg.stacked_layers);
  cfg.mean_pool = j.value("mean_pool", cfg.mean_pool);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

Tensor one_hot(const DnaSequence& seq) {
  validate_sequence(seq);
  const std::size_t length = seq.bases.size();
  Tensor t = Tensor::zeros({length, 4});
  for (std::size_t i = 0; i < length; ++i) {
    t(i, static_cast<std::size_t>(base_index(seq.bases[i]))) = 1.0;
  }
  return t;
}

Tensor embed_dense(const Tensor& onehot, const Tensor& embedding) {
  if (onehot.cols() != 4 || embedding.rows() != 4 || embedding.cols() != 4) {
    throw std::invalid_argument("embed_dense expects (L x 4) input and (4 x 4) embedding");
  }
  const std::size_t length = onehot.rows();
  Tensor out = Tensor::zeros({length, 4});
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double x = onehot(t, k);
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < 4; ++j) out(t, j) += x * embedding(k, j);
    }
  }
  return out;
}

std::vector<double> normalized_sigmoid(const std::vector<double>& z) {
  std::vector<double> s(z.size());
  double total = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    s[k] = logistic(z[k]);
    total += s[k];
  }
  for (double& v : s) v /= total;
  return s;
}

std::vector<double> output_score(const std::vector<double>& h, const Tensor& output_weights) {
  if (output_weights.cols() != h.size()) {
    throw std::invalid_argument("output_score: weight/feature dimension mismatch");
  }
  std::vector<double> z(output_weights.rows(), 0.0);
  matvec_add(output_weights, h.data(), z.data());
  return normalized_sigmoid(z);
}

double bce_loss(const std::vector<double>& predictions, const std::vector<int>& labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw std::invalid_argument("bce_loss: empty batch or size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double p = clamp_prob(predictions[i]);
    total += labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return -total / static_cast<double>(predictions.size());
}

std::vector<std::pair<std::string, Tensor*>> SteganalysisModel::named_tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  out.emplace_back("embedding", &embedding);
  const auto& names = LstmParams::tensor_names();
  auto enc = encoder.tensors();
  for (std::size_t i = 0; i < enc.size(); ++i) {
    out.emplace_back("encoder." + names[i], enc[i]);
  }
  for (std::size_t layer = 0; layer < stack.size(); ++layer) {
    auto ts = stack[layer].tensors();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out.emplace_back("stack." + std::to_string(layer) + "." + names[i], ts[i]);
    }
  }
  out.emplace_back("output_weights", &output_weights);
  out.emplace_back("norm_gamma", &norm_gamma);
  out.emplace_back("norm_beta", &norm_beta);
  out.emplace_back("norm_running_mean", &norm_stats.running_mean);
  out.emplace_back("norm_running_var", &norm_stats.running_var);
  return out;
}

std::vector<Tensor*> SteganalysisModel::trainable_tensors() {
  std::vector<Tensor*> out;
  out.push_back(&embedding);
  for (Tensor* t : encoder.tensors()) out.push_back(t);
  for (auto& layer : stack) {
    for (Tensor* t : layer.tensors()) out.push_back(t);
  }
  out.push_back(&output_weights);
  out.push_back(&norm_gamma);
  out.push_back(&norm_beta);
  return out;
}

bool SteganalysisModel::all_finite() const {
  if (!embedding.all_finite() || !encoder.all_finite()) return false;
  for (const auto& layer : stack) {
    if (!layer.all_finite()) return false;
  }
  return embedding.all_finite() && output_weights.all_finite() &&
         norm_gamma.all_finite() && norm_beta.all_finite() &&
         norm_stats.running_mean.all_finite() && norm_stats.running_var.all_finite();
}

SteganalysisModel init_model(const TrainConfig& cfg, const LstmParams* pretrained) {
  cfg.validate();
  const std::size_t d = cfg.hidden_units;
  SteganalysisModel model;
  model.hyper = cfg;
  model.embedding = Tensor::identity(4);
  if (pretrained) {
    if (pretrained->input_dim != 4 || pretrained->hidden_dim != d) {
      throw std::invalid_argument("pretrained encoder dimensions do not match config");
    }
    model.encoder = *pretrained;
  } else {
    auto rng = substream(cfg.seed, "clf/init/encoder");
    model.encoder = LstmParams::glorot(4, d, rng);
  }
  for (std::size_t layer = 1; layer < cfg.stacked_layers; ++layer) {
    auto rng = substream(cfg.seed, "clf/init/stack" + std::to_string(layer));
    model.stack.push_back(LstmParams::glorot(d, d, rng));
  }
  {
    auto rng = substream(cfg.seed, "clf/init/output");
    model.output_weights = glorot_tensor({kNumClasses, d}, d, kNumClasses, rng);
  }
  model.norm_gamma = Tensor::zeros({kNumClasses});
  model.norm_gamma.fill(1.0);
  model.norm_beta = Tensor::zeros({kNumClasses});
  model.norm_stats.running_mean = Tensor::zeros({kNumClasses});
  model.norm_stats.running_var = Tensor::zeros({kNumClasses});
  model.norm_stats.running_var.fill(1.0);
  return model;
}

void forward_sequence(const SteganalysisModel& model, const DnaSequence& seq,
                      SeqForward& out) {
  out.onehot = one_hot(seq);
  Tensor embedded = embed_dense(out.onehot, model.embedding);
  out.embedded = embedded.values;
  const std::size_t steps = embedded.rows();

  out.traces.assign(1 + model.stack.size(), LstmTrace{});
  lstm_forward(model.encoder, out.embedded.data(), steps, out.traces[0]);
  for (std::size_t layer = 0; layer < model.stack.size(); ++layer) {
    lstm_forward(model.stack[layer], out.traces[layer].h.data(), steps,
                 out.traces[layer + 1]);
  }

  const LstmTrace& top = out.traces.back();
  const std::size_t d = top.hidden_dim;
  out.h.assign(d, 0.0);
  if (model.hyper.mean_pool) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t k = 0; k < d; ++k) out.h[k] += top.h[t * d + k];
    }
    for (double& v : out.h) v /= static_cast<double>(steps);
  } else {
    const double* last = top.h_final();
    std::copy(last, last + d, out.h.begin());
  }
}

ModelGrads ModelGrads::zeros_like(const SteganalysisModel& model) {
  ModelGrads g;
  g.embedding = Tensor::zeros(model.embedding.shape);
  g.encoder = LstmParams::zeros(model.encoder.input_dim, model.encoder.hidden_dim);
  for (const auto& layer : model.stack) {
    g.stack.push_back(LstmParams::zeros(layer.input_dim, layer.hidden_dim));
  }
  g.output_weights = Tensor::zeros(model.output_weights.shape);
  g.norm_gamma = Tensor::zeros(model.norm_gamma.shape);
  g.norm_beta = Tensor::zeros(model.norm_beta.shape);
  return g;
}

std::vector<Tensor*> ModelGrads::tensors() {
  std::vector<Tensor*> out;
  out.push_back(&embedding);
  for (Tensor* t : encoder.tensors()) out.push_back(t);
  for (auto& layer : stack) {
    for (Tensor* t : layer.tensors()) out.push_back(t);
  }
  out.push_back(&output_weights);
  out.push_back(&norm_gamma);
  out.push_back(&norm_beta);
  return out;
}

void ModelGrads::zero() {
  for (Tensor* t : tensors()) t->fill(0.0);
}

namespace {

// Backpropagates dh (gradient on the pooled representation) through the
// recurrent stack, the embedding and into parameter gradients.
void backward_sequence(const SteganalysisModel& model, const SeqForward& fwd,
                       const std::vector<double>& dh_pooled, ModelGrads& grads) {
  const std::size_t steps = fwd.traces[0].steps;
  const std::size_t d = model.hidden_dim();

  std::vector<double> dh(steps * d, 0.0);
  if (model.hyper.mean_pool) {
    const double scale = 1.0 / static_cast<double>(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t k = 0; k < d; ++k) dh[t * d + k] = dh_pooled[k] * scale;
    }
  } else {
    std::copy(dh_pooled.begin(), dh_pooled.end(), dh.end() - static_cast<long>(d));
  }

  std::vector<double> dx;
  for (std::size_t layer = model.stack.size(); layer-- > 0;) {
    lstm_backward(model.stack[layer], fwd.traces[layer + 1], dh, grads.stack[layer], &dx);
    dh = dx;
  }
  lstm_backward(model.encoder, fwd.traces[0], dh, grads.encoder, &dx);

  // dx is the gradient on the embedded inputs; route it into the embedding.
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double x = fwd.onehot(t, k);
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < 4; ++j) grads.embedding(k, j) += x * dx[t * 4 + j];
    }
  }
}

}  // namespace

double classifier_batch_pass(const SteganalysisModel& model,
                             const std::vector<const DnaSequence*>& batch,
                             const std::vector<int>& labels, ModelGrads* grads,
                             NormStats* running_update) {
  const std::size_t batch_size = batch.size();
  if (batch_size == 0 || labels.size() != batch_size) {
    throw std::invalid_argument("classifier_batch_pass: empty batch or label mismatch");
  }
  const std::size_t d = model.hidden_dim();

  std::vector<SeqForward> fwd(batch_size);
  std::vector<std::vector<double>> z(batch_size, std::vector<double>(kNumClasses, 0.0));
  for (std::size_t b = 0; b < batch_size; ++b) {
    forward_sequence(model, *batch[b], fwd[b]);
    matvec_add(model.output_weights, fwd[b].h.data(), z[b].data());
  }

  // Batch normalization of the output pre-activations, per unit.
  std::vector<double> mean(kNumClasses, 0.0), var(kNumClasses, 0.0);
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    for (std::size_t b = 0; b < batch_size; ++b) mean[k] += z[b][k];
    mean[k] /= static_cast<double>(batch_size);
    for (std::size_t b = 0; b < batch_size; ++b) {
      const double c = z[b][k] - mean[k];
      var[k] += c * c;
    }
    var[k] /= static_cast<double>(batch_size);
  }

  std::vector<std::vector<double>> xhat(batch_size, std::vector<double>(kNumClasses));
  std::vector<std::vector<double>> probs(batch_size);
  std::vector<double> istd(kNumClasses);
  for (std::size_t k = 0; k < kNumClasses; ++k) istd[k] = 1.0 / std::sqrt(var[k] + kBnEpsilon);

  double loss = 0.0;
  for (std::size_t b = 0; b < batch_size; ++b) {
    std::vector<double> zt(kNumClasses);
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      xhat[b][k] = (z[b][k] - mean[k]) * istd[k];
      zt[k] = model.norm_gamma[k] * xhat[b][k] + model.norm_beta[k];
    }
    probs[b] = normalized_sigmoid(zt);
    const double p = clamp_prob(probs[b][1]);
    loss -= labels[b] ? std::log(p) : std::log(1.0 - p);
  }
  loss /= static_cast<double>(batch_size);

  if (running_update) {
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      running_update->running_mean[k] =
          (1.0 - kBnMomentum) * running_update->running_mean[k] + kBnMomentum * mean[k];
      running_update->running_var[k] =
          (1.0 - kBnMomentum) * running_update->running_var[k] + kBnMomentum * var[k];
    }
  }

  if (!grads) return loss;

  // d loss / d normalized pre-activation.
  std::vector<std::vector<double>> dzt(batch_size, std::vector<double>(kNumClasses));
  const double inv_n = 1.0 / static_cast<double>(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    std::vector<double> s(kNumClasses);
    double total = 0.0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      const double zt = model.norm_gamma[k] * xhat[b][k] + model.norm_beta[k];
      s[k] = logistic(zt);
      total += s[k];
    }
    const std::size_t y = static_cast<std::size_t>(labels[b]);
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      double g = s[k] * (1.0 - s[k]) / total;
      if (k == y) g -= (1.0 - s[k]);
      dzt[b][k] = g * inv_n;
    }
  }

  // Batch-norm backward.
  std::vector<std::vector<double>> dz(batch_size, std::vector<double>(kNumClasses));
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    double dgamma = 0.0, dbeta = 0.0, dvar = 0.0, dmean = 0.0, dxhat_sum = 0.0,
           centered_sum = 0.0;
    for (std::size_t b = 0; b < batch_size; ++b) {
      dbeta += dzt[b][k];
      dgamma += dzt[b][k] * xhat[b][k];
    }
    for (std::size_t b = 0; b < batch_size; ++b) {
      const double dxhat = dzt[b][k] * model.norm_gamma[k];
      const double centered = z[b][k] - mean[k];
      dvar += dxhat * centered * (-0.5) * istd[k] * istd[k] * istd[k];
      dxhat_sum += dxhat;
      centered_sum += centered;
    }
    dmean = -istd[k] * dxhat_sum +
            dvar * (-2.0 / static_cast<double>(batch_size)) * centered_sum;
    for (std::size_t b = 0; b < batch_size; ++b) {
      const double dxhat = dzt[b][k] * model.norm_gamma[k];
      const double centered = z[b][k] - mean[k];
      dz[b][k] = dxhat * istd[k] +
                 dvar * 2.0 * centered / static_cast<double>(batch_size) +
                 dmean / static_cast<double>(batch_size);
    }
    grads->norm_gamma[k] += dgamma;
    grads->norm_beta[k] += dbeta;
  }

  // Output weights, then through the recurrent stack per sequence.
  for (std::size_t b = 0; b < batch_size; ++b) {
    outer_add(grads->output_weights, dz[b].data(), fwd[b].h.data());
    std::vector<double> dh(d, 0.0);
    matvec_transpose_add(model.output_weights, dz[b].data(), dh.data());
    backward_sequence(model, fwd[b], dh, *grads);
  }
  return loss;
}

std::vector<Tensor*> AutoencoderModel::tensors() {
  std::vector<Tensor*> out;
  for (Tensor* t : encoder.tensors()) out.push_back(t);
  for (Tensor* t : decoder.tensors()) out.push_back(t);
  out.push_back(&recon_w);
  out.push_back(&recon_b);
  return out;
}

AutoencoderGrads AutoencoderGrads::zeros_like(const AutoencoderModel& ae) {
  AutoencoderGrads g;
  g.encoder = LstmParams::zeros(ae.encoder.input_dim, ae.encoder.hidden_dim);
  g.decoder = LstmParams::zeros(ae.decoder.input_dim, ae.decoder.hidden_dim);
  g.recon_w = Tensor::zeros(ae.recon_w.shape);
  g.recon_b = Tensor::zeros(ae.recon_b.shape);
  return g;
}

std::vector<Tensor*> AutoencoderGrads::tensors() {
  std::vector<Tensor*> out;
  for (Tensor* t : encoder.tensors()) out.push_back(t);
  for (Tensor* t : decoder.tensors()) out.push_back(t);
  out.push_back(&recon_w);
  out.push_back(&recon_b);
  return out;
}

void AutoencoderGrads::zero() {
  for (Tensor* t : tensors()) t->fill(0.0);
}

namespace {

// Mean over timesteps of ||x_t - x_hat_t||^2 for one sequence; gradients
// accumulate scaled by `weight` (the caller's 1/batch factor).
double autoencoder_sequence_pass(const AutoencoderModel& ae, const DnaSequence& seq,
                                 double weight, AutoencoderGrads* grads) {
  const Tensor x = one_hot(seq);
  const std::size_t steps = x.rows();
  const std::size_t d = ae.encoder.hidden_dim;

  LstmTrace enc_trace;
  lstm_forward(ae.encoder, x.values.data(), steps, enc_trace);
  const double* representation = enc_trace.h_final();

  // Decoder consumes the repeated representation at every step.
  std::vector<double> dec_in(steps * d);
  for (std::size_t t = 0; t < steps; ++t) {
    std::copy(representation, representation + d, dec_in.begin() + static_cast<long>(t * d));
  }
  LstmTrace dec_trace;
  lstm_forward(ae.decoder, dec_in.data(), steps, dec_trace);

  double loss = 0.0;
  std::vector<double> dxhat(steps * 4, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    double xhat[4];
    for (std::size_t j = 0; j < 4; ++j) xhat[j] = ae.recon_b[j];
    matvec_add(ae.recon_w, dec_trace.h_at(t), xhat);
    for (std::size_t j = 0; j < 4; ++j) {
      const double diff = xhat[j] - x(t, j);
      loss += diff * diff;
      dxhat[t * 4 + j] = 2.0 * diff / static_cast<double>(steps);
    }
  }
  loss /= static_cast<double>(steps);
  if (!grads) return loss;

  std::vector<double> dh_dec(steps * d, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double g = dxhat[t * 4 + j] * weight;
      grads->recon_b[j] += g;
      for (std::size_t k = 0; k < d; ++k) {
        grads->recon_w(j, k) += g * dec_trace.h[t * d + k];
        dh_dec[t * d + k] += ae.recon_w(j, k) * g;
      }
    }
  }

  std::vector<double> d_dec_in;
  lstm_backward(ae.decoder, dec_trace, dh_dec, grads->decoder, &d_dec_in);

  // The representation fed every decoder step; fold those gradients back
  // onto the encoder's final hidden state.
  std::vector<double> dh_enc(steps * d, 0.0);
  double* dh_last = dh_enc.data() + (steps - 1) * d;
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < d; ++k) dh_last[k] += d_dec_in[t * d + k];
  }
  lstm_backward(ae.encoder, enc_trace, dh_enc, grads->encoder, nullptr);
  return loss;
}

double autoencoder_mean_loss(const AutoencoderModel& ae, const Corpus& corpus) {
  double total = 0.0;
  for (const auto& seq : corpus.sequences) {
    total += autoencoder_sequence_pass(ae, seq, 0.0, nullptr);
  }
  return total / static_cast<double>(corpus.sequences.size());
}

}  // namespace

double autoencoder_batch_pass(const AutoencoderModel& ae,
                              const std::vector<const DnaSequence*>& batch,
                              AutoencoderGrads* grads) {
  if (batch.empty()) throw std::invalid_argument("autoencoder_batch_pass: empty batch");
  const double weight = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const DnaSequence* seq : batch) {
    loss += weight * autoencoder_sequence_pass(ae, *seq, weight, grads);
  }
  return loss;
}

AutoencoderModel autoencode_train(const Corpus& corpus, const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.sequences.empty()) throw std::invalid_argument("autoencode_train: empty corpus");
  const std::size_t d = cfg.hidden_units;

  AutoencoderModel ae;
  {
    auto rng = substream(cfg.seed, "ae/init/encoder");
    ae.encoder = LstmParams::glorot(4, d, rng);
  }
  {
    auto rng = substream(cfg.seed, "ae/init/decoder");
    ae.decoder = LstmParams::glorot(d, d, rng);
  }
  {
    auto rng = substream(cfg.seed, "ae/init/recon");
    ae.recon_w = glorot_tensor({4, d}, d, 4, rng);
  }
  ae.recon_b = Tensor::zeros({4});
  ae.initial_loss = autoencoder_mean_loss(ae, corpus);

  AutoencoderGrads grads = AutoencoderGrads::zeros_like(ae);
  AdamState adam;
  auto params = ae.tensors();
  adam.init_like(params);
  const AdamConfig adam_cfg = cfg.adam();

  std::vector<std::size_t> order(corpus.sequences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.ae_epochs; ++epoch) {
    auto rng = substream(cfg.seed, "ae/shuffle/" + std::to_string(epoch));
    shuffle_stable(order, rng);

    double epoch_total = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double weight = 1.0 / static_cast<double>(stop - start);
      grads.zero();
      double batch_loss = 0.0;
      for (std::size_t idx = start; idx < stop; ++idx) {
        batch_loss += weight * autoencoder_sequence_pass(
                                   ae, corpus.sequences[order[idx]], weight, &grads);
      }
      if (!std::isfinite(batch_loss)) throw TrainingDivergence(epoch);
      auto grad_list = grads.tensors();
      adam_step(params, grad_list, adam, adam_cfg);
      epoch_total += batch_loss * static_cast<double>(stop - start);
      seen += stop - start;
    }
    ae.epoch_loss.push_back(epoch_total / static_cast<double>(seen));
  }
  return ae;
}

TrainedClassifier train_classifier(const Corpus& corpus, const LstmParams* pretrained,
                                   const TrainConfig& cfg) {
  cfg.validate();
  if (!corpus.has_both_labels()) {
    throw std::invalid_argument("train_classifier: corpus must contain both intron and exon sequences");
  }
  for (const auto& seq : corpus.sequences) {
    if (seq.label == Label::unknown) {
      throw std::invalid_argument("train_classifier: sequence '" + seq.id + "' is unlabeled");
    }
  }

  TrainedClassifier out;
  out.model = init_model(cfg, pretrained);
  SteganalysisModel& model = out.model;

  ModelGrads grads = ModelGrads::zeros_like(model);
  AdamState adam;
  auto params = model.trainable_tensors();
  adam.init_like(params);
  const AdamConfig adam_cfg = cfg.adam();

  std::vector<std::size_t> order(corpus.sequences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.clf_epochs; ++epoch) {
    auto rng = substream(cfg.seed, "clf/shuffle/" + std::to_string(epoch));
    shuffle_stable(order, rng);

    double epoch_total = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::vector<const DnaSequence*> batch;
      std::vector<int> labels;
      for (std::size_t idx = start; idx < stop; ++idx) {
        const auto& seq = corpus.sequences[order[idx]];
        batch.push_back(&seq);
        labels.push_back(seq.label == Label::intron ? 1 : 0);
      }
      grads.zero();
      const double loss = classifier_batch_pass(model, batch, labels, &grads, &model.norm_stats);
      if (!std::isfinite(loss)) throw TrainingDivergence(epoch);
      auto grad_list = grads.tensors();
      adam_step(params, grad_list, adam, adam_cfg);
      epoch_total += loss * static_cast<double>(batch.size());
      seen += batch.size();
    }
    out.epoch_loss.push_back(epoch_total / static_cast<double>(seen));
  }
  return out;
}

double predict_score(const SteganalysisModel& model, const DnaSequence& seq) {
  SeqForward fwd;
  forward_sequence(model, seq, fwd);
  std::vector<double> z(kNumClasses, 0.0);
  matvec_add(model.output_weights, fwd.h.data(), z.data());
  std::vector<double> zt(kNumClasses);
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const double istd = 1.0 / std::sqrt(model.norm_stats.running_var[k] + kBnEpsilon);
    zt[k] = model.norm_gamma[k] * (z[k] - model.norm_stats.running_mean[k]) * istd +
            model.norm_beta[k];
  }
  return normalized_sigmoid(zt)[1];
}

double classifier_accuracy(const SteganalysisModel& model,
                           const std::vector<DnaSequence>& seqs) {
  if (seqs.empty()) throw std::invalid_argument("classifier_accuracy: empty input");
  std::size_t correct = 0;
  for (const auto& seq : seqs) {
    const bool predicted_intron = predict_score(model, seq) > 0.5;
    const bool is_intron = seq.label == Label::intron;
    if (predicted_intron == is_intron) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(seqs.size());
}

nlohmann::json model_to_json(const SteganalysisModel& model) {
  nlohmann::json tensors = nlohmann::json::array();
  auto named = const_cast<SteganalysisModel&>(model).named_tensors();
  for (const auto& [name, tensor] : named) {
    tensors.push_back({{"name", name}, {"shape", tensor->shape}, {"values", tensor->values}});
  }
  return nlohmann::json{{"format_version", kModelFormatVersion},
                        {"kind", "rnn"},
                        {"hyper", to_json(model.hyper)},
                        {"tensors", tensors}};
}

SteganalysisModel model_from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format version");
  }
  if (j.value("kind", "") != "rnn") {
    throw std::runtime_error("checkpoint kind is not 'rnn'");
  }
  TrainConfig cfg = train_config_from_json(j.at("hyper"));
  SteganalysisModel model = init_model(cfg, nullptr);

  auto named = model.named_tensors();
  std::size_t loaded = 0;
  for (const auto& entry : j.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    auto it = std::find_if(named.begin(), named.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == named.end()) throw std::runtime_error("unknown tensor in checkpoint: " + name);
    Tensor loaded_tensor{entry.at("shape").get<std::vector<std::size_t>>(),
                         entry.at("values").get<std::vector<double>>()};
    if (loaded_tensor.shape != it->second->shape) {
      throw std::runtime_error("shape mismatch for tensor " + name);
    }
    if (loaded_tensor.values.size() != shape_numel(loaded_tensor.shape)) {
      throw std::runtime_error("value count mismatch for tensor " + name);
    }
    *it->second = std::move(loaded_tensor);
    ++loaded;
  }
  if (loaded != named.size()) throw std::runtime_error("checkpoint is missing tensors");
  return model;
}

void save_model(const SteganalysisModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model checkpoint: " + path);
  out << model_to_json(model).dump(2) << '\n';
}

SteganalysisModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace stegodna

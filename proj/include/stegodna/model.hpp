#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stegodna/adam.hpp"
#include "stegodna/dna.hpp"
#include "stegodna/lstm.hpp"
#include "stegodna/tensor.hpp"

namespace stegodna {

inline constexpr std::size_t kNumClasses = 2;  // unit 0 = exon, unit 1 = intron

struct TrainConfig {
  std::size_t ae_epochs = 50;
  std::size_t clf_epochs = 100;
  std::size_t hidden_units = 16;  // 60 at paper scale
  std::size_t batch_size = 32;    // 100 at paper scale
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t stacked_layers = 2;  // total recurrent depth, pretrained layer included
  bool mean_pool = false;          // false: final-timestep h
  std::uint64_t seed = 0;

  static TrainConfig paper_scale();

  AdamConfig adam() const {
    return AdamConfig{learning_rate, adam_beta1, adam_beta2, adam_epsilon};
  }

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Thrown when a training loss turns non-finite.
struct TrainingDivergence : std::runtime_error {
  std::size_t epoch;
  explicit TrainingDivergence(std::size_t e)
      : std::runtime_error("training diverged at epoch " + std::to_string(e)), epoch(e) {}
};

// One-hot rows: A=[1,0,0,0], C=[0,1,0,0], G=[0,0,1,0], T=[0,0,0,1].
Tensor one_hot(const DnaSequence& seq);

// Row-wise product (L x 4) * (4 x 4); the trainable dense nucleotide code.
Tensor embed_dense(const Tensor& onehot, const Tensor& embedding);

// Pr(y=i|h) = sigma(w_i.h) / sum_k sigma(w_k.h).
std::vector<double> normalized_sigmoid(const std::vector<double>& z);
std::vector<double> output_score(const std::vector<double>& h, const Tensor& output_weights);

// Eq-style mean binary cross-entropy with probabilities clamped to
// [1e-12, 1-1e-12]; labels are 0/1.
double bce_loss(const std::vector<double>& predictions, const std::vector<int>& labels);

// Running statistics of the output-layer pre-activations, one per unit.
struct NormStats {
  Tensor running_mean;  // K
  Tensor running_var;   // K
};

struct SteganalysisModel {
  Tensor embedding;               // 4 x 4
  LstmParams encoder;             // first recurrent layer (autoencoder-pretrained)
  std::vector<LstmParams> stack;  // further stacked layers
  Tensor output_weights;          // K x hidden
  Tensor norm_gamma, norm_beta;   // K (batch-norm scale/shift)
  NormStats norm_stats;
  TrainConfig hyper;

  std::size_t hidden_dim() const { return encoder.hidden_dim; }
  std::vector<std::pair<std::string, Tensor*>> named_tensors();  // checkpoint order
  std::vector<Tensor*> trainable_tensors();                      // excludes running stats
  bool all_finite() const;
};

// Freshly initialized (untrained) model; encoder copied from `pretrained`
// when given, Glorot otherwise. The embedding starts as the identity so a
// pretrained encoder initially sees unchanged inputs.
SteganalysisModel init_model(const TrainConfig& cfg, const LstmParams* pretrained);

// Per-sequence forward activations kept for backpropagation.
struct SeqForward {
  Tensor onehot;
  std::vector<double> embedded;   // L x 4
  std::vector<LstmTrace> traces;  // one per recurrent layer
  std::vector<double> h;          // pooled representation
};

void forward_sequence(const SteganalysisModel& model, const DnaSequence& seq,
                      SeqForward& out);

// Gradient buffers mirroring the trainable tensors.
struct ModelGrads {
  Tensor embedding;
  LstmParams encoder;
  std::vector<LstmParams> stack;
  Tensor output_weights;
  Tensor norm_gamma, norm_beta;

  static ModelGrads zeros_like(const SteganalysisModel& model);
  std::vector<Tensor*> tensors();
  void zero();
};

// Train-mode batch pass: batch statistics normalize the output
// pre-activations. Returns the mean loss; accumulates analytic gradients
// when `grads` is non-null; updates running stats only when
// `running_update` is non-null. Pure when both are null.
double classifier_batch_pass(const SteganalysisModel& model,
                             const std::vector<const DnaSequence*>& batch,
                             const std::vector<int>& labels, ModelGrads* grads,
                             NormStats* running_update);

struct AutoencoderModel {
  LstmParams encoder;  // one-hot in, hidden out
  LstmParams decoder;  // hidden in (repeated representation), hidden out
  Tensor recon_w;      // 4 x hidden
  Tensor recon_b;      // 4
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;

  std::vector<Tensor*> tensors();
};

struct AutoencoderGrads {
  LstmParams encoder, decoder;
  Tensor recon_w, recon_b;

  static AutoencoderGrads zeros_like(const AutoencoderModel& ae);
  std::vector<Tensor*> tensors();
  void zero();
};

// Mean reconstruction loss over the batch; analytic gradients accumulate
// into `grads` when non-null.
double autoencoder_batch_pass(const AutoencoderModel& ae,
                              const std::vector<const DnaSequence*>& batch,
                              AutoencoderGrads* grads);

// Unsupervised sequence-to-sequence pretraining minimizing ||x - x_hat||^2
// over one-hot inputs. Deterministic per cfg.seed.
AutoencoderModel autoencode_train(const Corpus& corpus, const TrainConfig& cfg);

struct TrainedClassifier {
  SteganalysisModel model;
  std::vector<double> epoch_loss;
};

// Supervised fine-tuning: embedding -> encoder -> stack -> batch-normalized
// output -> mean BCE, optimized by Adam. Deterministic per cfg.seed.
TrainedClassifier train_classifier(const Corpus& corpus, const LstmParams* pretrained,
                                   const TrainConfig& cfg);

// Pr(intron | sequence) in (0, 1); inference uses running norm statistics.
double predict_score(const SteganalysisModel& model, const DnaSequence& seq);

// Classification accuracy (threshold 0.5) over labeled sequences.
double classifier_accuracy(const SteganalysisModel& model,
                           const std::vector<DnaSequence>& seqs);

void save_model(const SteganalysisModel& model, const std::string& path);
SteganalysisModel load_model(const std::string& path);
nlohmann::json model_to_json(const SteganalysisModel& model);
SteganalysisModel model_from_json(const nlohmann::json& j);

}  // namespace stegodna

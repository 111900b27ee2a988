#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stegodna/dna.hpp"

namespace stegodna {

// k-mer counts in fixed lexicographic order (A < C < G < T), 4^k entries.
struct FeatureVector {
  std::vector<double> values;
  std::size_t k = 0;
  bool normalized = false;
};

FeatureVector kmer_features(const DnaSequence& seq, std::size_t k, bool normalize);

std::size_t kmer_vocabulary_size(std::size_t k);
std::string kmer_at(std::size_t index, std::size_t k);

// Pearson statistic sum (o - e)^2 / e; errors on a zero expected cell.
double chi_square_stat(const FeatureVector& observed, const FeatureVector& expected);

// 1 - p0^2 - p1^2 over a two-class node.
double gini_impurity(std::size_t count0, std::size_t count1);

enum class BaselineKind { svm, adaboost, forest };

const char* to_string(BaselineKind kind);
BaselineKind baseline_kind_from_string(std::string_view s);

struct SvmParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  double polarity = 1.0;  // predict +1 when polarity*(x - threshold) <= 0
  double alpha = 0.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf_label = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct BaselineModel {
  BaselineKind kind = BaselineKind::svm;
  std::size_t dim = 0;
  SvmParams svm;
  std::vector<Stump> stumps;
  std::vector<Tree> trees;
};

// Labels are 0/1 (1 = intron). All trainers are deterministic per seed and
// require both classes.
BaselineModel train_svm(const std::vector<FeatureVector>& features,
                        const std::vector<int>& labels, std::size_t epochs, double lr,
                        double reg, std::uint64_t seed);
BaselineModel train_adaboost(const std::vector<FeatureVector>& features,
                             const std::vector<int>& labels, std::size_t rounds);
BaselineModel train_forest(const std::vector<FeatureVector>& features,
                           const std::vector<int>& labels, std::size_t n_trees,
                           std::size_t max_depth, std::uint64_t seed);

struct Prediction {
  int label = 0;     // 0/1
  double score = 0;  // svm margin, boosted sum, or vote fraction
};

Prediction baseline_predict(const BaselineModel& model, const FeatureVector& features);

nlohmann::json baseline_to_json(const BaselineModel& model);
BaselineModel baseline_from_json(const nlohmann::json& j);

}  // namespace stegodna

#include "stegodna/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stegodna/rng.hpp"

namespace stegodna {

std::size_t kmer_vocabulary_size(std::size_t k) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < k; ++i) n *= 4;
  return n;
}

std::string kmer_at(std::size_t index, std::size_t k) {
  std::string s(k, 'A');
  for (std::size_t i = k; i-- > 0;) {
    s[i] = index_base(static_cast<int>(index % 4));
    index /= 4;
  }
  return s;
}

FeatureVector kmer_features(const DnaSequence& seq, std::size_t k, bool normalize) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (seq.bases.size() < k) {
    throw std::invalid_argument("sequence '" + seq.id + "' is shorter than k");
  }
  FeatureVector fv;
  fv.k = k;
  fv.normalized = normalize;
  fv.values.assign(kmer_vocabulary_size(k), 0.0);
  const std::size_t windows = seq.bases.size() - k + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    std::size_t index = 0;
    for (std::size_t j = 0; j < k; ++j) {
      index = index * 4 + static_cast<std::size_t>(base_index(seq.bases[i + j]));
    }
    fv.values[index] += 1.0;
  }
  if (normalize) {
    for (double& v : fv.values) v /= static_cast<double>(windows);
  }
  return fv;
}

double chi_square_stat(const FeatureVector& observed, const FeatureVector& expected) {
  if (observed.values.size() != expected.values.size()) {
    throw std::invalid_argument("chi_square_stat: dimension mismatch");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.values.size(); ++i) {
    const double e = expected.values[i];
    if (e <= 0.0) throw std::invalid_argument("chi_square_stat: zero expected cell");
    const double diff = observed.values[i] - e;
    stat += diff * diff / e;
  }
  return stat;
}

const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::svm: return "svm";
    case BaselineKind::adaboost: return "adaboost";
    case BaselineKind::forest: return "forest";
  }
  return "svm";
}

BaselineKind baseline_kind_from_string(std::string_view s) {
  if (s == "svm") return BaselineKind::svm;
  if (s == "adaboost") return BaselineKind::adaboost;
  if (s == "forest") return BaselineKind::forest;
  throw std::invalid_argument("unknown baseline kind: " + std::string(s));
}

namespace {

void check_training_set(const std::vector<FeatureVector>& features,
                        const std::vector<int>& labels) {
  if (features.empty() || features.size() != labels.size()) {
    throw std::invalid_argument("empty training set or feature/label mismatch");
  }
  const std::size_t dim = features[0].values.size();
  for (const auto& f : features) {
    if (f.values.size() != dim) throw std::invalid_argument("ragged feature vectors");
  }
  bool has0 = false, has1 = false;
  for (int y : labels) {
    if (y == 0) has0 = true;
    else if (y == 1) has1 = true;
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (!has0 || !has1) throw std::invalid_argument("training set must contain both classes");
}

}  // namespace

BaselineModel train_svm(const std::vector<FeatureVector>& features,
                        const std::vector<int>& labels, std::size_t epochs, double lr,
                        double reg, std::uint64_t seed) {
  check_training_set(features, labels);
  const std::size_t n = features.size();
  const std::size_t dim = features[0].values.size();

  BaselineModel model;
  model.kind = BaselineKind::svm;
  model.dim = dim;
  model.svm.weights.assign(dim, 0.0);
  model.svm.bias = 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Subgradient descent on L2-regularized hinge loss.
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    auto rng = substream(seed, "svm/shuffle/" + std::to_string(epoch));
    shuffle_stable(order, rng);
    for (std::size_t idx : order) {
      const auto& x = features[idx].values;
      const double y = labels[idx] ? 1.0 : -1.0;
      double margin = model.svm.bias;
      for (std::size_t j = 0; j < dim; ++j) margin += model.svm.weights[j] * x[j];
      for (std::size_t j = 0; j < dim; ++j) {
        double g = reg * model.svm.weights[j];
        if (y * margin < 1.0) g -= y * x[j];
        model.svm.weights[j] -= lr * g;
      }
      if (y * margin < 1.0) model.svm.bias += lr * y;
    }
  }
  return model;
}

namespace {

double stump_output(const Stump& s, const std::vector<double>& x) {
  return s.polarity * (x[s.feature] - s.threshold) <= 0.0 ? 1.0 : -1.0;
}

// Exhaustive weighted-error minimization over (feature, threshold, polarity).
Stump fit_stump(const std::vector<FeatureVector>& features, const std::vector<double>& y,
                const std::vector<double>& weights) {
  const std::size_t n = features.size();
  const std::size_t dim = features[0].values.size();
  Stump best;
  double best_err = std::numeric_limits<double>::max();
  for (std::size_t f = 0; f < dim; ++f) {
    std::vector<double> cuts;
    cuts.reserve(n);
    for (const auto& fv : features) cuts.push_back(fv.values[f]);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (double cut : cuts) {
      for (double pol : {1.0, -1.0}) {
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double pred =
              pol * (features[i].values[f] - cut) <= 0.0 ? 1.0 : -1.0;
          if (pred != y[i]) err += weights[i];
        }
        if (err < best_err) {
          best_err = err;
          best = Stump{f, cut, pol, 0.0};
        }
      }
    }
  }
  return best;
}

}  // namespace

BaselineModel train_adaboost(const std::vector<FeatureVector>& features,
                             const std::vector<int>& labels, std::size_t rounds) {
  check_training_set(features, labels);
  if (rounds == 0) throw std::invalid_argument("adaboost needs at least one round");
  const std::size_t n = features.size();

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));

  BaselineModel model;
  model.kind = BaselineKind::adaboost;
  model.dim = features[0].values.size();

  for (std::size_t round = 0; round < rounds; ++round) {
    Stump stump = fit_stump(features, y, weights);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (stump_output(stump, features[i].values) != y[i]) err += weights[i];
    }
    err = std::clamp(err, 1e-10, 1.0 - 1e-10);
    stump.alpha = 0.5 * std::log((1.0 - err) / err);
    model.stumps.push_back(stump);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] *= std::exp(-stump.alpha * y[i] * stump_output(stump, features[i].values));
      total += weights[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw std::runtime_error("adaboost: degenerate weight distribution at round " +
                               std::to_string(round));
    }
    for (double& w : weights) w /= total;
  }
  return model;
}

double gini_impurity(std::size_t count0, std::size_t count1) {
  const std::size_t total = count0 + count1;
  if (total == 0) return 0.0;
  const double p0 = static_cast<double>(count0) / static_cast<double>(total);
  const double p1 = static_cast<double>(count1) / static_cast<double>(total);
  return 1.0 - p0 * p0 - p1 * p1;
}

namespace {

struct TreeBuilder {
  const std::vector<FeatureVector>& features;
  const std::vector<int>& labels;
  std::size_t max_depth;
  std::size_t features_per_split;
  std::mt19937_64& rng;
  Tree tree;

  int build(std::vector<std::size_t>& samples, std::size_t depth) {
    std::size_t count1 = 0;
    for (std::size_t i : samples) count1 += static_cast<std::size_t>(labels[i]);
    const std::size_t count0 = samples.size() - count1;
    const int majority = count1 * 2 >= samples.size() ? 1 : 0;

    if (depth >= max_depth || count0 == 0 || count1 == 0 || samples.size() < 2) {
      return make_leaf(majority);
    }

    // Random feature subset, CART-style Gini split.
    const std::size_t dim = features[0].values.size();
    std::vector<std::size_t> candidates(dim);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    for (std::size_t i = 0; i < features_per_split && i < dim; ++i) {
      std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, dim - i));
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(std::min(features_per_split, dim));

    double best_score = std::numeric_limits<double>::max();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;

    for (std::size_t f : candidates) {
      std::vector<double> vals;
      vals.reserve(samples.size());
      for (std::size_t i : samples) vals.push_back(features[i].values[f]);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t v = 0; v + 1 < vals.size(); ++v) {
        const double threshold = 0.5 * (vals[v] + vals[v + 1]);
        std::size_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
        for (std::size_t i : samples) {
          const bool left = features[i].values[f] <= threshold;
          if (left) {
            labels[i] ? ++l1 : ++l0;
          } else {
            labels[i] ? ++r1 : ++r0;
          }
        }
        const double nl = static_cast<double>(l0 + l1), nr = static_cast<double>(r0 + r1);
        const double score =
            (nl * gini_impurity(l0, l1) + nr * gini_impurity(r0, r1)) /
            static_cast<double>(samples.size());
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = threshold;
          found = true;
        }
      }
    }
    if (!found) return make_leaf(majority);

    std::vector<std::size_t> left_samples, right_samples;
    for (std::size_t i : samples) {
      (features[i].values[best_feature] <= best_threshold ? left_samples : right_samples)
          .push_back(i);
    }
    if (left_samples.empty() || right_samples.empty()) return make_leaf(majority);

    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{static_cast<int>(best_feature), best_threshold, -1, -1, 0});
    const int left = build(left_samples, depth + 1);
    const int right = build(right_samples, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_index)].left = left;
    tree.nodes[static_cast<std::size_t>(node_index)].right = right;
    return node_index;
  }

  int make_leaf(int label) {
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, label});
    return static_cast<int>(tree.nodes.size()) - 1;
  }
};

int tree_predict(const Tree& tree, const std::vector<double>& x) {
  // The root is the first non-leaf if the tree has internal nodes; builder
  // emits the root at index 0 except for the all-leaf case.
  int node = 0;
  while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& n = tree.nodes[static_cast<std::size_t>(node)];
    node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[static_cast<std::size_t>(node)].leaf_label;
}

}  // namespace

BaselineModel train_forest(const std::vector<FeatureVector>& features,
                           const std::vector<int>& labels, std::size_t n_trees,
                           std::size_t max_depth, std::uint64_t seed) {
  check_training_set(features, labels);
  if (n_trees == 0) throw std::invalid_argument("forest needs at least one tree");
  const std::size_t n = features.size();
  const std::size_t dim = features[0].values.size();
  const std::size_t per_split = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dim))));

  BaselineModel model;
  model.kind = BaselineKind::forest;
  model.dim = dim;

  for (std::size_t t = 0; t < n_trees; ++t) {
    auto rng = substream(seed, "forest/tree/" + std::to_string(t));
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) {
      bootstrap[i] = static_cast<std::size_t>(uniform_index(rng, n));
    }
    TreeBuilder builder{features, labels, max_depth, per_split, rng, {}};
    builder.build(bootstrap, 0);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

Prediction baseline_predict(const BaselineModel& model, const FeatureVector& features) {
  const auto& x = features.values;
  if (x.size() != model.dim) {
    throw std::invalid_argument("baseline_predict: feature dimension mismatch");
  }
  Prediction pred;
  switch (model.kind) {
    case BaselineKind::svm: {
      double margin = model.svm.bias;
      for (std::size_t j = 0; j < x.size(); ++j) margin += model.svm.weights[j] * x[j];
      pred.score = margin;
      pred.label = margin > 0.0 ? 1 : 0;
      break;
    }
    case BaselineKind::adaboost: {
      double total = 0.0;
      for (const auto& s : model.stumps) total += s.alpha * stump_output(s, x);
      pred.score = total;
      pred.label = total > 0.0 ? 1 : 0;
      break;
    }
    case BaselineKind::forest: {
      std::size_t votes = 0;
      for (const auto& tree : model.trees) {
        votes += static_cast<std::size_t>(tree_predict(tree, x));
      }
      pred.score = static_cast<double>(votes) / static_cast<double>(model.trees.size());
      pred.label = 2 * votes >= model.trees.size() ? 1 : 0;
      break;
    }
  }
  return pred;
}

nlohmann::json baseline_to_json(const BaselineModel& model) {
  nlohmann::json j{{"format_version", 1}, {"kind", to_string(model.kind)}, {"dim", model.dim}};
  switch (model.kind) {
    case BaselineKind::svm:
      j["weights"] = model.svm.weights;
      j["bias"] = model.svm.bias;
      break;
    case BaselineKind::adaboost: {
      nlohmann::json stumps = nlohmann::json::array();
      for (const auto& s : model.stumps) {
        stumps.push_back({{"feature", s.feature},
                          {"threshold", s.threshold},
                          {"polarity", s.polarity},
                          {"alpha", s.alpha}});
      }
      j["stumps"] = stumps;
      break;
    }
    case BaselineKind::forest: {
      nlohmann::json trees = nlohmann::json::array();
      for (const auto& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
          nodes.push_back({{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"leaf_label", n.leaf_label}});
        }
        trees.push_back({{"nodes", nodes}});
      }
      j["trees"] = trees;
      break;
    }
  }
  return j;
}

BaselineModel baseline_from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error("unsupported baseline checkpoint version");
  }
  BaselineModel model;
  model.kind = baseline_kind_from_string(j.at("kind").get<std::string>());
  model.dim = j.at("dim").get<std::size_t>();
  switch (model.kind) {
    case BaselineKind::svm:
      model.svm.weights = j.at("weights").get<std::vector<double>>();
      model.svm.bias = j.at("bias").get<double>();
      break;
    case BaselineKind::adaboost:
      for (const auto& s : j.at("stumps")) {
        model.stumps.push_back(Stump{s.at("feature").get<std::size_t>(),
                                     s.at("threshold").get<double>(),
                                     s.at("polarity").get<double>(),
                                     s.at("alpha").get<double>()});
      }
      break;
    case BaselineKind::forest:
      for (const auto& t : j.at("trees")) {
        Tree tree;
        for (const auto& n : t.at("nodes")) {
          tree.nodes.push_back(TreeNode{n.at("feature").get<int>(),
                                        n.at("threshold").get<double>(),
                                        n.at("left").get<int>(), n.at("right").get<int>(),
                                        n.at("leaf_label").get<int>()});
        }
        model.trees.push_back(std::move(tree));
      }
      break;
  }
  return model;
}

}  // namespace stegodna

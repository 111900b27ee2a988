#include <doctest.h>

#include <cmath>

#include "stegodna/baselines.hpp"
#include "stegodna/rng.hpp"

using namespace stegodna;

namespace {

// One scalar feature, class 1 below the cut. Cleanly threshold-separable.
void threshold_dataset(std::vector<FeatureVector>& features, std::vector<int>& labels) {
  features.clear();
  labels.clear();
  for (double v : {0.1, 0.2, 0.3, 0.8, 0.9, 1.0}) {
    FeatureVector f;
    f.values = {v};
    features.push_back(f);
    labels.push_back(v < 0.5 ? 1 : 0);
  }
}

std::vector<FeatureVector> random_features(std::mt19937_64& rng, std::size_t n,
                                           std::size_t dim) {
  std::vector<FeatureVector> out(n);
  for (auto& f : out) {
    f.values.resize(dim);
    for (double& v : f.values) v = uniform_real(rng, 0.0, 1.0);
  }
  return out;
}

}  // namespace

TEST_CASE("kmer_features fixed cases") {
  auto f = kmer_features({"s", "ACGT", Label::unknown}, 2, false);
  REQUIRE(f.values.size() == 16);
  CHECK(f.values[0 * 4 + 1] == 1.0);  // AC
  CHECK(f.values[1 * 4 + 2] == 1.0);  // CG
  CHECK(f.values[2 * 4 + 3] == 1.0);  // GT
  double total = 0.0;
  for (double v : f.values) total += v;
  CHECK(total == 3.0);

  auto g = kmer_features({"s", "AAAA", Label::unknown}, 1, true);
  CHECK(g.values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("kmer_features normalization sums to 1") {
  auto rng = substream(50, "kmer-norm");
  for (int trial = 0; trial < 30; ++trial) {
    DnaSequence seq;
    seq.id = "r";
    const std::size_t len = 3 + uniform_index(rng, 60);
    for (std::size_t i = 0; i < len; ++i) {
      seq.bases.push_back(index_base(static_cast<int>(uniform_index(rng, 4))));
    }
    auto f = kmer_features(seq, 3, true);
    double total = 0.0;
    for (double v : f.values) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(kmer_features({"s", "AC", Label::unknown}, 3, true),
                  std::invalid_argument);
}

TEST_CASE("kmer vocabulary order is lexicographic") {
  CHECK(kmer_at(0, 2) == "AA");
  CHECK(kmer_at(1, 2) == "AC");
  CHECK(kmer_at(15, 2) == "TT");
  CHECK(kmer_vocabulary_size(3) == 64);
}

TEST_CASE("chi_square_stat reference values") {
  FeatureVector a, b;
  a.values = {10, 0};
  b.values = {5, 5};
  CHECK(chi_square_stat(a, b) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(chi_square_stat(b, b) == 0.0);

  FeatureVector zero;
  zero.values = {1.0, 0.0};
  CHECK_THROWS_AS(chi_square_stat(a, zero), std::invalid_argument);
}

TEST_CASE("chi_square_stat is non-negative") {
  auto rng = substream(51, "chi2");
  for (int trial = 0; trial < 100; ++trial) {
    FeatureVector o, e;
    for (int i = 0; i < 8; ++i) {
      o.values.push_back(uniform_real(rng, 0.0, 5.0));
      e.values.push_back(uniform_real(rng, 0.1, 5.0));
    }
    CHECK(chi_square_stat(o, e) >= 0.0);
  }
}

TEST_CASE("svm separates a 2-point set") {
  std::vector<FeatureVector> features(2);
  features[0].values = {1.0, 0.0};
  features[1].values = {0.0, 1.0};
  std::vector<int> labels = {1, 0};
  auto model = train_svm(features, labels, 50, 0.1, 1e-3, 1);
  CHECK(baseline_predict(model, features[0]).label == 1);
  CHECK(baseline_predict(model, features[1]).label == 0);
}

TEST_CASE("svm on identical features: majority rate, bounded weights") {
  std::vector<FeatureVector> features(10);
  for (auto& f : features) f.values = {0.5, 0.5};
  std::vector<int> labels = {1, 1, 1, 1, 1, 1, 0, 0, 0, 0};
  auto model = train_svm(features, labels, 40, 0.05, 1e-2, 2);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (baseline_predict(model, features[i]).label == labels[i]) ++correct;
  }
  CHECK(static_cast<double>(correct) / 10.0 == doctest::Approx(0.6));
  double norm = 0.0;
  for (double w : model.svm.weights) norm += w * w;
  CHECK(std::sqrt(norm) < 1.0);
}

TEST_CASE("svm training is deterministic per seed") {
  auto rng = substream(52, "svm-det");
  auto features = random_features(rng, 24, 6);
  std::vector<int> labels;
  for (std::size_t i = 0; i < features.size(); ++i) labels.push_back(i % 2);
  auto a = train_svm(features, labels, 10, 0.1, 1e-3, 7);
  auto b = train_svm(features, labels, 10, 0.1, 1e-3, 7);
  CHECK(a.svm.weights == b.svm.weights);
  CHECK(a.svm.bias == b.svm.bias);
}

TEST_CASE("svm requires both classes") {
  std::vector<FeatureVector> features(2);
  features[0].values = {1.0};
  features[1].values = {2.0};
  CHECK_THROWS_AS(train_svm(features, {1, 1}, 5, 0.1, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("adaboost one round on separable data") {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  threshold_dataset(features, labels);
  auto model = train_adaboost(features, labels, 1);
  for (std::size_t i = 0; i < features.size(); ++i) {
    CHECK(baseline_predict(model, features[i]).label == labels[i]);
  }
}

TEST_CASE("adaboost stump weight formula") {
  // err = 0.25 -> alpha = 0.5 ln 3.
  CHECK(0.5 * std::log((1.0 - 0.25) / 0.25) == doctest::Approx(0.5493).epsilon(1e-3));
  // Interleaved labels force the best stump to miss exactly one of four.
  std::vector<FeatureVector> features(4);
  features[0].values = {0.1};
  features[1].values = {0.2};
  features[2].values = {0.3};
  features[3].values = {0.8};
  std::vector<int> labels = {1, 0, 1, 0};
  auto model = train_adaboost(features, labels, 1);
  const double err = 0.25;
  CHECK(model.stumps[0].alpha == doctest::Approx(0.5 * std::log((1 - err) / err)));
}

TEST_CASE("adaboost rejects zero rounds") {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  threshold_dataset(features, labels);
  CHECK_THROWS_AS(train_adaboost(features, labels, 0), std::invalid_argument);
}

TEST_CASE("adaboost training-error bound holds on random datasets") {
  auto rng = substream(53, "ada-bound");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 6 + uniform_index(rng, 10);
    auto features = random_features(rng, n, 3);
    std::vector<int> labels;
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(static_cast<int>(uniform_index(rng, 2)));
      (labels.back() ? has1 : has0) = true;
    }
    if (!has0 || !has1) continue;
    auto model = train_adaboost(features, labels, 8);

    double bound = 1.0;
    for (const auto& s : model.stumps) {
      const double err = 1.0 / (1.0 + std::exp(2.0 * s.alpha));  // invert alpha
      bound *= 2.0 * std::sqrt(err * (1.0 - err));
    }
    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (baseline_predict(model, features[i]).label != labels[i]) ++mistakes;
    }
    const double train_error = static_cast<double>(mistakes) / static_cast<double>(n);
    CHECK(train_error <= bound + 1e-9);
  }
}

TEST_CASE("gini impurity of a pure node is zero") {
  CHECK(gini_impurity(5, 0) == 0.0);
  CHECK(gini_impurity(0, 3) == 0.0);
  CHECK(gini_impurity(2, 2) == doctest::Approx(0.5));
}

TEST_CASE("forest: single depth-1 tree separates threshold data") {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  threshold_dataset(features, labels);
  auto model = train_forest(features, labels, 1, 1, 3);
  for (std::size_t i = 0; i < features.size(); ++i) {
    CHECK(baseline_predict(model, features[i]).label == labels[i]);
  }
}

TEST_CASE("forest votes are exact fractions and deterministic") {
  auto rng = substream(54, "forest-votes");
  auto features = random_features(rng, 30, 4);
  std::vector<int> labels;
  for (std::size_t i = 0; i < features.size(); ++i) {
    labels.push_back(features[i].values[0] > 0.5 ? 1 : 0);
  }
  auto model = train_forest(features, labels, 9, 3, 11);
  auto again = train_forest(features, labels, 9, 3, 11);

  auto held_out = random_features(rng, 10, 4);
  for (const auto& x : held_out) {
    auto p = baseline_predict(model, x);
    CHECK(p.score >= 0.0);
    CHECK(p.score <= 1.0);
    const double scaled = p.score * 9.0;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);  // exact ninths
    CHECK(baseline_predict(again, x).score == p.score);
  }
}

TEST_CASE("all three trainers ace the separable set deterministically") {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  threshold_dataset(features, labels);
  auto svm = train_svm(features, labels, 60, 0.1, 1e-3, 5);
  auto ada = train_adaboost(features, labels, 3);
  auto forest = train_forest(features, labels, 5, 2, 5);
  for (std::size_t i = 0; i < features.size(); ++i) {
    CHECK(baseline_predict(svm, features[i]).label == labels[i]);
    CHECK(baseline_predict(ada, features[i]).label == labels[i]);
    CHECK(baseline_predict(forest, features[i]).label == labels[i]);
  }
}

TEST_CASE("baseline_predict degenerate svm and dimension check") {
  BaselineModel model;
  model.kind = BaselineKind::svm;
  model.dim = 2;
  model.svm.weights = {0.0, 0.0};
  model.svm.bias = 1.0;
  FeatureVector x;
  x.values = {3.0, -1.0};
  auto p = baseline_predict(model, x);
  CHECK(p.label == 1);
  CHECK(p.score == 1.0);

  FeatureVector wrong;
  wrong.values = {1.0};
  CHECK_THROWS_AS(baseline_predict(model, wrong), std::invalid_argument);
}

TEST_CASE("baseline predictions match a re-evaluation of stored parameters") {
  auto rng = substream(55, "baseline-oracle");
  auto features = random_features(rng, 20, 5);
  std::vector<int> labels;
  for (std::size_t i = 0; i < features.size(); ++i) {
    labels.push_back(features[i].values[2] > 0.5 ? 1 : 0);
  }
  auto svm = train_svm(features, labels, 20, 0.1, 1e-3, 9);
  auto ada = train_adaboost(features, labels, 5);

  for (const auto& x : random_features(rng, 5, 5)) {
    double margin = svm.svm.bias;
    for (std::size_t j = 0; j < 5; ++j) margin += svm.svm.weights[j] * x.values[j];
    CHECK(baseline_predict(svm, x).score == doctest::Approx(margin).epsilon(1e-12));

    double boosted = 0.0;
    for (const auto& s : ada.stumps) {
      const double out =
          s.polarity * (x.values[s.feature] - s.threshold) <= 0.0 ? 1.0 : -1.0;
      boosted += s.alpha * out;
    }
    CHECK(baseline_predict(ada, x).score == doctest::Approx(boosted).epsilon(1e-12));
  }
}

TEST_CASE("baseline checkpoints round trip") {
  auto rng = substream(56, "baseline-ckpt");
  auto features = random_features(rng, 16, 4);
  std::vector<int> labels;
  for (std::size_t i = 0; i < features.size(); ++i) {
    labels.push_back(features[i].values[0] > 0.5 ? 1 : 0);
  }
  for (auto kind : {BaselineKind::svm, BaselineKind::adaboost, BaselineKind::forest}) {
    BaselineModel model;
    switch (kind) {
      case BaselineKind::svm: model = train_svm(features, labels, 10, 0.1, 1e-3, 1); break;
      case BaselineKind::adaboost: model = train_adaboost(features, labels, 4); break;
      case BaselineKind::forest: model = train_forest(features, labels, 3, 2, 1); break;
    }
    BaselineModel loaded = baseline_from_json(baseline_to_json(model));
    for (const auto& x : random_features(rng, 8, 4)) {
      CHECK(baseline_predict(loaded, x).score == baseline_predict(model, x).score);
      CHECK(baseline_predict(loaded, x).label == baseline_predict(model, x).label);
    }
  }
}

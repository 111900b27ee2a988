#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "stegodna/experiment.hpp"
#include "stegodna/rng.hpp"

using namespace stegodna;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small, fast sweep: chi-square detector over a tiny synthetic corpus.
ExperimentConfig tiny_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.synthetic = default_synthetic_spec(seed, 300, 24);
  cfg.detector = "chisquare";
  cfg.rates = {0.0, 0.05};
  cfg.lengths = {300};
  cfg.cases_per_cell = 8;
  cfg.folds = 2;
  cfg.region = LabelContext::intron;
  cfg.window = 100;
  cfg.seed = seed;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("stegodna_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("accuracy formula") {
  CHECK(accuracy(99, 1, 0, 0) == 1.0);
  CHECK(accuracy(50, 0, 50, 0) == 0.5);
  CHECK(accuracy(0, 0, 0, 1) == 0.0);
  CHECK_THROWS_AS(accuracy(0, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("crossval_split: 10 sequences into 5 equal folds") {
  Corpus corpus;
  for (int i = 0; i < 5; ++i) {
    corpus.sequences.push_back({"i" + std::to_string(i), "ACGT", Label::intron});
    corpus.sequences.push_back({"e" + std::to_string(i), "ACGT", Label::exon});
  }
  auto folds = crossval_split(corpus, 5, 7);
  REQUIRE(folds.size() == 5);
  for (const auto& fold : folds) CHECK(fold.size() == 2);
}

TEST_CASE("crossval_split is an exact stratified partition") {
  auto rng = substream(60, "cv-prop");
  for (int trial = 0; trial < 100; ++trial) {
    Corpus corpus;
    const std::size_t introns = 3 + uniform_index(rng, 20);
    const std::size_t exons = 3 + uniform_index(rng, 20);
    for (std::size_t i = 0; i < introns; ++i) {
      corpus.sequences.push_back({"i" + std::to_string(i), "ACGT", Label::intron});
    }
    for (std::size_t i = 0; i < exons; ++i) {
      corpus.sequences.push_back({"e" + std::to_string(i), "ACGT", Label::exon});
    }
    const std::size_t folds_n = 2 + uniform_index(rng, 3);
    if (corpus.sequences.size() < folds_n) continue;
    auto folds = crossval_split(corpus, folds_n, trial);

    std::vector<bool> seen(corpus.sequences.size(), false);
    std::size_t total = 0, min_size = corpus.sequences.size(), max_size = 0;
    for (const auto& fold : folds) {
      min_size = std::min(min_size, fold.size());
      max_size = std::max(max_size, fold.size());
      for (std::size_t idx : fold) {
        CHECK_FALSE(seen[idx]);  // disjoint
        seen[idx] = true;
        ++total;
      }
    }
    CHECK(total == corpus.sequences.size());  // union covers the corpus
    CHECK(max_size - min_size <= 1);

    // Stratification: per-fold intron share close to the global share.
    const double global = static_cast<double>(introns) / static_cast<double>(total);
    for (const auto& fold : folds) {
      std::size_t fi = 0;
      for (std::size_t idx : fold) {
        if (corpus.sequences[idx].label == Label::intron) ++fi;
      }
      const double share = static_cast<double>(fi) / static_cast<double>(fold.size());
      CHECK(std::abs(share - global) <= 1.0 / static_cast<double>(fold.size()) + 1e-9);
    }
  }
}

TEST_CASE("crossval_split determinism and error") {
  Corpus corpus;
  for (int i = 0; i < 9; ++i) {
    corpus.sequences.push_back(
        {"s" + std::to_string(i), "ACGT", i % 2 ? Label::intron : Label::exon});
  }
  CHECK(crossval_split(corpus, 3, 5) == crossval_split(corpus, 3, 5));
  CHECK_THROWS_AS(crossval_split(corpus, 10, 5), std::invalid_argument);
}

TEST_CASE("results csv shape and NA policy") {
  ResultRecord r;
  r.detector = "rnn";
  r.region = "intron";
  r.length = 600;
  r.rate = 0.05;
  r.fold = 0;
  r.accuracy_clean = 0.95;
  r.accuracy_stego = 0.80;
  r.accuracy_diff = 0.15;
  r.detection_rate = 0.7;
  r.false_positive_rate = 0.2;

  TempDir dir("emit");
  CHECK(emit_results({r}, dir.path) == 0);
  const std::string csv = slurp(dir.path / "results.csv");
  CHECK(csv ==
        "detector,region,length,rate,fold,accuracy_clean,accuracy_stego,accuracy_diff,"
        "detection_rate,false_positive_rate\n"
        "rnn,intron,600,0.050000,0,0.950000,0.800000,0.150000,0.700000,0.200000\n");

  ResultRecord bad = r;
  bad.fold = 1;
  bad.accuracy_stego = std::numeric_limits<double>::quiet_NaN();
  bad.accuracy_diff = std::numeric_limits<double>::quiet_NaN();
  bad.detection_rate = std::numeric_limits<double>::quiet_NaN();
  CHECK(emit_results({r, bad}, dir.path) == 1);
  const std::string csv2 = slurp(dir.path / "results.csv");
  CHECK(csv2.find(",NA,NA,") != std::string::npos);

  CHECK_THROWS_AS(emit_results({}, dir.path), std::invalid_argument);
}

TEST_CASE("summary means match a manual recomputation") {
  std::vector<ResultRecord> records;
  auto rng = substream(61, "summary");
  for (int i = 0; i < 10; ++i) {
    ResultRecord r;
    r.detector = "svm";
    r.region = "both";
    r.length = 600;
    r.rate = i < 5 ? 0.01 : 0.05;
    r.fold = static_cast<std::size_t>(i % 5);
    r.accuracy_clean = uniform_real(rng, 0.5, 1.0);
    r.accuracy_stego = uniform_real(rng, 0.3, 1.0);
    r.accuracy_diff = r.accuracy_clean - r.accuracy_stego;
    r.detection_rate = uniform_real(rng, 0.0, 1.0);
    r.false_positive_rate = uniform_real(rng, 0.0, 1.0);
    records.push_back(r);
  }
  auto j = summary_json(records);
  REQUIRE(j.at("groups").size() == 1);
  const auto& rates = j.at("groups")[0].at("rates");
  REQUIRE(rates.size() == 2);

  for (const auto& entry : rates) {
    const double rate = entry.at("rate").get<double>();
    double mean = 0.0;
    std::size_t n = 0;
    for (const auto& r : records) {
      if (r.rate == rate) {
        mean += r.accuracy_diff;
        ++n;
      }
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& r : records) {
      if (r.rate == rate) var += (r.accuracy_diff - mean) * (r.accuracy_diff - mean);
    }
    var /= static_cast<double>(n);
    CHECK(entry.at("mean_accuracy_diff").get<double>() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(entry.at("std_accuracy_diff").get<double>() ==
          doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(entry.at("cells").get<std::size_t>() == 5);
  }
}

TEST_CASE("experiment config json round trip") {
  ExperimentConfig cfg = tiny_config(5);
  cfg.scheme = StegoScheme{SchemeKind::keybits, 3, {}};
  cfg.detector = "svm";
  auto back = experiment_config_from_json(to_json(cfg));
  CHECK(back.detector == "svm");
  CHECK(back.rates == cfg.rates);
  CHECK(back.lengths == cfg.lengths);
  CHECK(back.folds == cfg.folds);
  CHECK(back.region == cfg.region);
  CHECK(back.seed == cfg.seed);
  REQUIRE(back.scheme.has_value());
  CHECK(back.scheme->kind == SchemeKind::keybits);
  REQUIRE(back.synthetic.has_value());
  CHECK(back.synthetic->count_per_class == cfg.synthetic->count_per_class);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg = tiny_config(5);
  cfg.folds = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config(5);
  cfg.rates = {1.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config(5);
  cfg.detector = "nonsense";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config(5);
  cfg.synthetic.reset();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("rate-zero cells: accuracy_diff 0 and detection equals false positives") {
  TempDir dir("ratezero");
  auto records = run_experiment(tiny_config(11), dir.path);
  bool saw_zero = false;
  for (const auto& r : records) {
    if (r.rate == 0.0) {
      saw_zero = true;
      CHECK(r.accuracy_diff == 0.0);
      CHECK(r.detection_rate == r.false_positive_rate);
    }
    CHECK(r.accuracy_diff ==
          doctest::Approx(r.accuracy_clean - r.accuracy_stego).epsilon(1e-12));
  }
  CHECK(saw_zero);
}

TEST_CASE("experiment determinism and resume idempotence") {
  TempDir dir_a("det_a");
  TempDir dir_b("det_b");
  auto cfg = tiny_config(23);
  run_experiment(cfg, dir_a.path);
  run_experiment(cfg, dir_b.path);
  CHECK(slurp(dir_a.path / "results.csv") == slurp(dir_b.path / "results.csv"));
  CHECK(slurp(dir_a.path / "summary.json") == slurp(dir_b.path / "summary.json"));

  // Re-running a completed directory must not change any file contents.
  std::map<std::string, std::string> before;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a.path)) {
    if (entry.is_regular_file()) before[entry.path().string()] = slurp(entry.path());
  }
  run_experiment(cfg, dir_a.path);
  std::size_t count = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a.path)) {
    if (!entry.is_regular_file()) continue;
    ++count;
    REQUIRE(before.count(entry.path().string()) == 1);
    CHECK(before[entry.path().string()] == slurp(entry.path()));
  }
  CHECK(count == before.size());

  const std::string manifest = slurp(dir_a.path / "run_manifest.json");
  CHECK(manifest.find("\"seed\"") != std::string::npos);
  CHECK(manifest.find("\"version\"") != std::string::npos);
}

TEST_CASE("keybits scheme cells run end to end") {
  TempDir dir("scheme");
  auto cfg = tiny_config(31);
  cfg.rates = {0.02};
  cfg.scheme = StegoScheme{SchemeKind::keybits, 3, {}};
  auto records = run_experiment(cfg, dir.path);
  REQUIRE(records.size() == cfg.folds);
  for (const auto& r : records) {
    CHECK(std::isfinite(r.accuracy_diff));
    CHECK(r.detection_rate >= 0.0);
    CHECK(r.detection_rate <= 1.0);
  }
}

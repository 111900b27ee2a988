#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stegodna/detector.hpp"
#include "stegodna/dna.hpp"
#include "stegodna/model.hpp"
#include "stegodna/stego.hpp"
#include "stegodna/synthetic.hpp"

namespace stegodna {

// One sweep: detectors x lengths x rates x folds over a clean corpus and
// its rate-modified counterpart.
struct ExperimentConfig {
  // Corpus source: synthetic spec (seq_length is overridden per cell
  // length) or FASTA plus exon-interval annotations.
  std::optional<SyntheticSpec> synthetic;
  std::string fasta_path;
  std::string intervals_path;

  std::string detector = "rnn";  // rnn | svm | adaboost | forest | chisquare
  std::vector<double> rates = {0.01, 0.05, 0.10};
  std::optional<StegoScheme> scheme;  // unset: random perturbation at each rate

  std::vector<std::size_t> lengths = {600, 1200, 1800};
  std::size_t cases_per_cell = 20;
  std::size_t folds = 5;
  LabelContext region = LabelContext::mixed;  // "both"
  std::size_t window = 100;
  std::size_t kmer_k = 3;

  TrainConfig train;

  std::size_t svm_epochs = 30;
  double svm_lr = 0.05;
  double svm_reg = 1e-3;
  std::size_t adaboost_rounds = 25;
  std::size_t forest_trees = 15;
  std::size_t forest_depth = 4;

  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ResultRecord {
  std::string detector;
  std::string region;
  std::size_t length = 0;
  double rate = 0.0;
  std::size_t fold = 0;
  double accuracy_clean = 0.0;
  double accuracy_stego = 0.0;
  double accuracy_diff = 0.0;  // accuracy_clean - accuracy_stego
  double detection_rate = 0.0;
  double false_positive_rate = 0.0;
};

// (tp + tn) / (tp + tn + fp + fn)
double accuracy(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn);

// Stratified fold assignment: returns `folds` disjoint index sets covering
// the corpus, sizes differing by at most 1, deterministic per seed.
std::vector<std::vector<std::size_t>> crossval_split(const Corpus& corpus,
                                                     std::size_t folds,
                                                     std::uint64_t seed);

// Runs every (length, rate, fold) cell, trains/calibrates per (length,
// fold), and persists one JSON per cell under dir/cells so a re-run skips
// completed cells. Emits results.csv, summary.json and run_manifest.json.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         const std::filesystem::path& out_dir);

// Returns the number of NaN-valued (diverged) cells written as "NA".
std::size_t emit_results(const std::vector<ResultRecord>& records,
                         const std::filesystem::path& out_dir);

std::string results_csv_text(const std::vector<ResultRecord>& records);
nlohmann::json summary_json(const std::vector<ResultRecord>& records);

}  // namespace stegodna

#include "stegodna/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "stegodna/baselines.hpp"
#include "stegodna/fasta.hpp"
#include "stegodna/labeling.hpp"
#include "stegodna/rng.hpp"
#include "stegodna/version.hpp"

namespace stegodna {

namespace {

const char* region_name(LabelContext region) {
  switch (region) {
    case LabelContext::intron: return "intron";
    case LabelContext::exon: return "exon";
    default: return "both";
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int rate_basis_points(double rate) {
  return static_cast<int>(std::lround(rate * 10000.0));
}

bool write_file_if_changed(const std::filesystem::path& path, const std::string& content) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream existing;
    existing << in.rdbuf();
    if (existing.str() == content) return false;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  return true;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!synthetic && fasta_path.empty()) {
    throw std::invalid_argument("experiment needs a synthetic spec or a FASTA corpus");
  }
  if (!fasta_path.empty() && intervals_path.empty()) {
    throw std::invalid_argument("FASTA corpora need an exon interval CSV for labeling");
  }
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (lengths.empty()) throw std::invalid_argument("at least one sequence length required");
  for (std::size_t length : lengths) {
    if (length == 0) throw std::invalid_argument("lengths must be positive");
    if (length < window) throw std::invalid_argument("length must be >= window");
  }
  if (rates.empty()) throw std::invalid_argument("at least one rate required");
  for (double r : rates) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("rates must lie in [0, 1]");
  }
  if (cases_per_cell == 0) throw std::invalid_argument("cases_per_cell must be positive");
  if (window == 0) throw std::invalid_argument("window must be positive");
  if (kmer_k == 0) throw std::invalid_argument("kmer_k must be positive");
  train.validate();
  // Detector name check.
  if (detector != "rnn" && detector != "chisquare") baseline_kind_from_string(detector);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  if (cfg.synthetic) j["synthetic"] = to_json(*cfg.synthetic);
  if (!cfg.fasta_path.empty()) {
    j["fasta"] = cfg.fasta_path;
    j["intervals"] = cfg.intervals_path;
  }
  j["detector"] = cfg.detector;
  j["rates"] = cfg.rates;
  if (cfg.scheme) {
    j["scheme"] = {{"kind", to_string(cfg.scheme->kind)},
                   {"key_length", cfg.scheme->key_length}};
  }
  j["lengths"] = cfg.lengths;
  j["cases_per_cell"] = cfg.cases_per_cell;
  j["folds"] = cfg.folds;
  j["region"] = region_name(cfg.region);
  j["window"] = cfg.window;
  j["kmer_k"] = cfg.kmer_k;
  j["train"] = to_json(cfg.train);
  j["svm_epochs"] = cfg.svm_epochs;
  j["svm_lr"] = cfg.svm_lr;
  j["svm_reg"] = cfg.svm_reg;
  j["adaboost_rounds"] = cfg.adaboost_rounds;
  j["forest_trees"] = cfg.forest_trees;
  j["forest_depth"] = cfg.forest_depth;
  j["seed"] = cfg.seed;
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("synthetic")) cfg.synthetic = synthetic_spec_from_json(j.at("synthetic"));
  cfg.fasta_path = j.value("fasta", "");
  cfg.intervals_path = j.value("intervals", "");
  cfg.detector = j.value("detector", cfg.detector);
  if (j.contains("rates")) cfg.rates = j.at("rates").get<std::vector<double>>();
  if (j.contains("scheme")) {
    StegoScheme scheme;
    scheme.kind = scheme_kind_from_string(j.at("scheme").at("kind").get<std::string>());
    scheme.key_length = j.at("scheme").value("key_length", std::size_t{3});
    cfg.scheme = scheme;
  }
  if (j.contains("lengths")) cfg.lengths = j.at("lengths").get<std::vector<std::size_t>>();
  cfg.cases_per_cell = j.value("cases_per_cell", cfg.cases_per_cell);
  cfg.folds = j.value("folds", cfg.folds);
  if (j.contains("region")) {
    cfg.region = label_context_from_string(j.at("region").get<std::string>());
  }
  cfg.window = j.value("window", cfg.window);
  cfg.kmer_k = j.value("kmer_k", cfg.kmer_k);
  if (j.contains("train")) cfg.train = train_config_from_json(j.at("train"));
  cfg.svm_epochs = j.value("svm_epochs", cfg.svm_epochs);
  cfg.svm_lr = j.value("svm_lr", cfg.svm_lr);
  cfg.svm_reg = j.value("svm_reg", cfg.svm_reg);
  cfg.adaboost_rounds = j.value("adaboost_rounds", cfg.adaboost_rounds);
  cfg.forest_trees = j.value("forest_trees", cfg.forest_trees);
  cfg.forest_depth = j.value("forest_depth", cfg.forest_depth);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

double accuracy(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
  const std::size_t total = tp + tn + fp + fn;
  if (total == 0) throw std::invalid_argument("accuracy: zero total count");
  return static_cast<double>(tp + tn) / static_cast<double>(total);
}

std::vector<std::vector<std::size_t>> crossval_split(const Corpus& corpus,
                                                     std::size_t folds,
                                                     std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("crossval_split: folds must be >= 2");
  if (corpus.sequences.size() < folds) {
    throw std::invalid_argument("crossval_split: fewer sequences than folds");
  }
  // Group indices per label, shuffle each group, then deal round-robin with
  // one running counter so fold sizes differ by at most 1 overall.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < corpus.sequences.size(); ++i) {
    groups[to_string(corpus.sequences[i].label)].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t counter = 0;
  for (auto& [label, indices] : groups) {
    auto rng = substream(seed, "cv/" + label);
    shuffle_stable(indices, rng);
    for (std::size_t idx : indices) {
      out[counter % folds].push_back(idx);
      ++counter;
    }
  }
  return out;
}

namespace {

// A trained per-cell detector: a sequence-level score (Eq.-2 input) and an
// intron/exon class decision.
struct TrainedDetector {
  std::function<double(const DnaSequence&)> score;
  std::function<int(const DnaSequence&)> classify;  // 1 = intron
};

std::vector<DnaSequence> windows_of(const std::vector<DnaSequence>& seqs,
                                    std::size_t window) {
  std::vector<DnaSequence> out;
  for (const auto& seq : seqs) {
    if (seq.bases.size() <= window) {
      out.push_back(seq);
      continue;
    }
    auto tiles = chop_windows(seq, window);
    out.insert(out.end(), tiles.begin(), tiles.end());
  }
  return out;
}

template <typename WindowScore>
double mean_window_score(const DnaSequence& seq, std::size_t window,
                         const WindowScore& score) {
  if (seq.bases.size() <= window) return score(seq);
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t start = 0; start + window <= seq.bases.size(); start += window) {
    DnaSequence tile{seq.id, seq.bases.substr(start, window), seq.label};
    total += score(tile);
    ++n;
  }
  return total / static_cast<double>(n);
}

FeatureVector smoothed_class_distribution(const std::vector<DnaSequence>& windows,
                                          Label label, std::size_t k) {
  FeatureVector expected;
  expected.k = k;
  expected.normalized = true;
  expected.values.assign(kmer_vocabulary_size(k), 1.0);  // Laplace smoothing
  double total = static_cast<double>(expected.values.size());
  for (const auto& w : windows) {
    if (label != Label::unknown && w.label != label) continue;
    FeatureVector counts = kmer_features(w, k, false);
    for (std::size_t i = 0; i < counts.values.size(); ++i) {
      expected.values[i] += counts.values[i];
      total += counts.values[i];
    }
  }
  for (double& v : expected.values) v /= total;
  return expected;
}

TrainedDetector train_cell_detector(const ExperimentConfig& cfg,
                                    const std::vector<DnaSequence>& train_seqs,
                                    std::uint64_t train_seed) {
  const std::size_t window = cfg.window;
  auto train_windows = std::make_shared<std::vector<DnaSequence>>(
      windows_of(train_seqs, window));

  if (cfg.detector == "rnn") {
    Corpus corpus;
    corpus.sequences = *train_windows;
    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = train_seed;
    AutoencoderModel ae = autoencode_train(corpus, train_cfg);
    auto model = std::make_shared<SteganalysisModel>(
        train_classifier(corpus, &ae.encoder, train_cfg).model);
    auto window_score = [model](const DnaSequence& s) { return predict_score(*model, s); };
    TrainedDetector det;
    det.score = [window, window_score](const DnaSequence& s) {
      return mean_window_score(s, window, window_score);
    };
    det.classify = [det_score = det.score](const DnaSequence& s) {
      return det_score(s) > 0.5 ? 1 : 0;
    };
    return det;
  }

  if (cfg.detector == "chisquare") {
    const std::size_t k = cfg.kmer_k;
    auto intron_expected = std::make_shared<FeatureVector>(
        smoothed_class_distribution(*train_windows, Label::intron, k));
    auto exon_expected = std::make_shared<FeatureVector>(
        smoothed_class_distribution(*train_windows, Label::exon, k));
    auto pooled = std::make_shared<FeatureVector>(
        smoothed_class_distribution(*train_windows, Label::unknown, k));
    auto context_owner = cfg.region == LabelContext::intron ? intron_expected
                         : cfg.region == LabelContext::exon ? exon_expected
                                                            : pooled;
    TrainedDetector det;
    det.score = [window, k, context_owner](const DnaSequence& s) {
      return mean_window_score(s, window, [&](const DnaSequence& w) {
        return chi_square_stat(kmer_features(w, k, true), *context_owner);
      });
    };
    det.classify = [window, k, intron_expected, exon_expected](const DnaSequence& s) {
      const double to_intron = mean_window_score(s, window, [&](const DnaSequence& w) {
        return chi_square_stat(kmer_features(w, k, true), *intron_expected);
      });
      const double to_exon = mean_window_score(s, window, [&](const DnaSequence& w) {
        return chi_square_stat(kmer_features(w, k, true), *exon_expected);
      });
      return to_intron < to_exon ? 1 : 0;
    };
    return det;
  }

  // Feature-vector baselines.
  const std::size_t k = cfg.kmer_k;
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  for (const auto& w : *train_windows) {
    features.push_back(kmer_features(w, k, true));
    labels.push_back(w.label == Label::intron ? 1 : 0);
  }
  const BaselineKind kind = baseline_kind_from_string(cfg.detector);
  auto model = std::make_shared<BaselineModel>([&] {
    switch (kind) {
      case BaselineKind::svm:
        return train_svm(features, labels, cfg.svm_epochs, cfg.svm_lr, cfg.svm_reg,
                         train_seed);
      case BaselineKind::adaboost:
        return train_adaboost(features, labels, cfg.adaboost_rounds);
      default:
        return train_forest(features, labels, cfg.forest_trees, cfg.forest_depth,
                            train_seed);
    }
  }());
  const double threshold = kind == BaselineKind::forest ? 0.5 : 0.0;
  auto window_score = [model, k](const DnaSequence& s) {
    return baseline_predict(*model, kmer_features(s, k, true)).score;
  };
  TrainedDetector det;
  det.score = [window, window_score](const DnaSequence& s) {
    return mean_window_score(s, window, window_score);
  };
  det.classify = [det_score = det.score, threshold](const DnaSequence& s) {
    return det_score(s) > threshold ? 1 : 0;
  };
  return det;
}

DnaSequence make_stego(const ExperimentConfig& cfg, const DnaSequence& seq, double rate,
                       std::uint64_t cell_seed) {
  if (!cfg.scheme) {
    return perturb(seq, rate, cell_seed).stego_sequence;
  }
  const std::size_t length = seq.bases.size();
  auto bits_needed = static_cast<std::size_t>(
      std::ceil(rate * static_cast<double>(length)));
  auto rng = substream(cell_seed, "message/" + seq.id);
  DnaSequence stego = seq;
  switch (cfg.scheme->kind) {
    case SchemeKind::keybits: {
      if (bits_needed % 2 != 0) ++bits_needed;  // keep the bit stream mappable
      BitString message;
      for (std::size_t i = 0; i < bits_needed; ++i) {
        message.push_back(static_cast<int>(uniform_index(rng, 2)));
      }
      BitString cover = dna_to_bits(seq);
      stego = bits_to_dna(embed_keybits(cover, message, cfg.scheme->key_length), seq.id);
      stego.label = seq.label;
      break;
    }
    case SchemeKind::codon: {
      const CodonTable& table =
          cfg.scheme->codon_table.empty() ? standard_codon_table() : cfg.scheme->codon_table;
      BitString message;
      for (std::size_t i = 0; i < bits_needed; ++i) {
        message.push_back(static_cast<int>(uniform_index(rng, 2)));
      }
      stego = embed_codon(seq, message, table).stego_sequence;
      break;
    }
    case SchemeKind::ascii: {
      const std::size_t bytes = (bits_needed + 7) / 8;
      std::string payload;
      for (std::size_t i = 0; i < bytes; ++i) {
        payload.push_back(static_cast<char>(uniform_index(rng, 256)));
      }
      stego.bases += encode_ascii(payload).bases;
      break;
    }
    case SchemeKind::fivebit: {
      const std::size_t symbols = (bits_needed + 4) / 5;
      std::string payload;
      for (std::size_t i = 0; i < symbols; ++i) {
        payload.push_back(fivebit_alphabet()[uniform_index(rng, 32)]);
      }
      stego.bases += encode_fivebit(payload).bases;
      break;
    }
  }
  return stego;
}

Corpus corpus_for_length(const ExperimentConfig& cfg, std::size_t length) {
  if (cfg.synthetic) {
    SyntheticSpec spec = *cfg.synthetic;
    spec.seq_length = length;
    return generate_synthetic(spec);
  }
  auto sequences = parse_fasta_file(cfg.fasta_path);
  auto intervals = read_interval_csv_file(cfg.intervals_path);
  Corpus corpus;
  corpus.source = CorpusSource::fasta;
  for (const auto& seq : sequences) {
    auto it = intervals.find(seq.id);
    const std::vector<Interval> empty;
    auto labeled = label_by_intervals(seq, it == intervals.end() ? empty : it->second, length);
    corpus.sequences.insert(corpus.sequences.end(), labeled.begin(), labeled.end());
  }
  if (!corpus.has_both_labels()) {
    throw std::invalid_argument("labeled FASTA corpus lacks one of the classes at length " +
                                std::to_string(length));
  }
  return corpus;
}

nlohmann::json record_to_json(const ResultRecord& r) {
  auto put = [](double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
  };
  return nlohmann::json{{"detector", r.detector},
                        {"region", r.region},
                        {"length", r.length},
                        {"rate", r.rate},
                        {"fold", r.fold},
                        {"accuracy_clean", put(r.accuracy_clean)},
                        {"accuracy_stego", put(r.accuracy_stego)},
                        {"accuracy_diff", put(r.accuracy_diff)},
                        {"detection_rate", put(r.detection_rate)},
                        {"false_positive_rate", put(r.false_positive_rate)}};
}

ResultRecord record_from_json(const nlohmann::json& j) {
  auto get = [&](const char* key) {
    return j.at(key).is_null() ? std::numeric_limits<double>::quiet_NaN()
                               : j.at(key).get<double>();
  };
  ResultRecord r;
  r.detector = j.at("detector").get<std::string>();
  r.region = j.at("region").get<std::string>();
  r.length = j.at("length").get<std::size_t>();
  r.rate = j.at("rate").get<double>();
  r.fold = j.at("fold").get<std::size_t>();
  r.accuracy_clean = get("accuracy_clean");
  r.accuracy_stego = get("accuracy_stego");
  r.accuracy_diff = get("accuracy_diff");
  r.detection_rate = get("detection_rate");
  r.false_positive_rate = get("false_positive_rate");
  return r;
}

std::filesystem::path cell_path(const std::filesystem::path& dir,
                                const ExperimentConfig& cfg, std::size_t length,
                                double rate, std::size_t fold) {
  char name[160];
  std::snprintf(name, sizeof name, "%s_%s_L%zu_R%04d_F%zu.json", cfg.detector.c_str(),
                region_name(cfg.region), length, rate_basis_points(rate), fold);
  return dir / name;
}

void sort_records(std::vector<ResultRecord>& records) {
  std::sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
    return std::tie(a.detector, a.region, a.length, a.rate, a.fold) <
           std::tie(b.detector, b.region, b.length, b.rate, b.fold);
  });
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         const std::filesystem::path& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  const auto cells_dir = out_dir / "cells";
  std::filesystem::create_directories(cells_dir);

  nlohmann::json manifest{{"config", to_json(cfg)},
                          {"seed", cfg.seed},
                          {"version", kToolkitVersion}};
  write_file_if_changed(out_dir / "run_manifest.json", manifest.dump(2) + "\n");

  std::vector<ResultRecord> records;

  for (std::size_t length : cfg.lengths) {
    Corpus corpus = corpus_for_length(cfg, length);
    auto folds = crossval_split(corpus, cfg.folds,
                                substream_seed(cfg.seed, "cv/" + std::to_string(length)));

    for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
      std::vector<double> missing;
      for (double rate : cfg.rates) {
        const auto path = cell_path(cells_dir, cfg, length, rate, fold);
        if (std::filesystem::exists(path)) {
          std::ifstream in(path);
          nlohmann::json j;
          in >> j;
          records.push_back(record_from_json(j));
        } else {
          missing.push_back(rate);
        }
      }
      if (missing.empty()) continue;

      std::vector<DnaSequence> train_seqs, test_seqs;
      for (std::size_t f = 0; f < cfg.folds; ++f) {
        for (std::size_t idx : folds[f]) {
          (f == fold ? test_seqs : train_seqs).push_back(corpus.sequences[idx]);
        }
      }
      std::vector<DnaSequence> eval_set;
      for (const auto& seq : test_seqs) {
        if (cfg.region == LabelContext::intron && seq.label != Label::intron) continue;
        if (cfg.region == LabelContext::exon && seq.label != Label::exon) continue;
        if (eval_set.size() >= cfg.cases_per_cell) break;
        eval_set.push_back(seq);
      }

      const std::uint64_t train_seed = substream_seed(
          cfg.seed, "train/L" + std::to_string(length) + "/F" + std::to_string(fold));

      bool diverged = false;
      std::string divergence_note;
      TrainedDetector detector;
      Calibration calibration;
      double accuracy_clean = std::numeric_limits<double>::quiet_NaN();
      double false_positive_rate = std::numeric_limits<double>::quiet_NaN();
      try {
        detector = train_cell_detector(cfg, train_seqs, train_seed);
        calibration = calibrate_with(detector.score, train_seqs, cfg.region);
        if (eval_set.empty()) {
          throw std::runtime_error("no evaluation sequences in region " +
                                   std::string(region_name(cfg.region)));
        }
        std::size_t correct = 0, flagged = 0;
        for (const auto& seq : eval_set) {
          const int predicted = detector.classify(seq);
          const int actual = seq.label == Label::intron ? 1 : 0;
          if (predicted == actual) ++correct;
          if (detect(calibration, detector.score(seq)).flagged) ++flagged;
        }
        accuracy_clean = static_cast<double>(correct) / static_cast<double>(eval_set.size());
        false_positive_rate =
            static_cast<double>(flagged) / static_cast<double>(eval_set.size());
      } catch (const TrainingDivergence& e) {
        diverged = true;
        divergence_note = e.what();
      }

      for (double rate : missing) {
        ResultRecord record;
        record.detector = cfg.detector;
        record.region = region_name(cfg.region);
        record.length = length;
        record.rate = rate;
        record.fold = fold;
        record.accuracy_clean = accuracy_clean;
        record.false_positive_rate = false_positive_rate;

        if (diverged) {
          record.accuracy_stego = std::numeric_limits<double>::quiet_NaN();
          record.accuracy_diff = std::numeric_limits<double>::quiet_NaN();
          record.detection_rate = std::numeric_limits<double>::quiet_NaN();
          std::cerr << "warning: cell (length=" << length << ", fold=" << fold
                    << ", rate=" << rate << "): " << divergence_note << "\n";
        } else {
          const std::uint64_t cell_seed = substream_seed(
              cfg.seed, "cell/L" + std::to_string(length) + "/F" + std::to_string(fold) +
                            "/R" + std::to_string(rate_basis_points(rate)));
          std::size_t correct = 0, flagged = 0;
          for (const auto& seq : eval_set) {
            DnaSequence stego = make_stego(cfg, seq, rate, cell_seed);
            const int predicted = detector.classify(stego);
            const int actual = seq.label == Label::intron ? 1 : 0;
            if (predicted == actual) ++correct;
            if (detect(calibration, detector.score(stego)).flagged) ++flagged;
          }
          record.accuracy_stego =
              static_cast<double>(correct) / static_cast<double>(eval_set.size());
          record.accuracy_diff = record.accuracy_clean - record.accuracy_stego;
          record.detection_rate =
              static_cast<double>(flagged) / static_cast<double>(eval_set.size());
        }

        write_file_if_changed(cell_path(cells_dir, cfg, length, rate, fold),
                              record_to_json(record).dump(2) + "\n");
        records.push_back(record);
      }
    }
  }

  sort_records(records);
  emit_results(records, out_dir);
  return records;
}

std::string results_csv_text(const std::vector<ResultRecord>& records) {
  std::string csv =
      "detector,region,length,rate,fold,accuracy_clean,accuracy_stego,accuracy_diff,"
      "detection_rate,false_positive_rate\n";
  for (const auto& r : records) {
    csv += r.detector + ',' + r.region + ',' + std::to_string(r.length) + ',' +
           format_double(r.rate) + ',' + std::to_string(r.fold) + ',' +
           format_double(r.accuracy_clean) + ',' + format_double(r.accuracy_stego) + ',' +
           format_double(r.accuracy_diff) + ',' + format_double(r.detection_rate) + ',' +
           format_double(r.false_positive_rate) + '\n';
  }
  return csv;
}

nlohmann::json summary_json(const std::vector<ResultRecord>& records) {
  // (detector, region) -> rate -> accuracy_diff samples.
  std::map<std::pair<std::string, std::string>, std::map<double, std::vector<const ResultRecord*>>>
      groups;
  for (const auto& r : records) {
    groups[{r.detector, r.region}][r.rate].push_back(&r);
  }
  nlohmann::json out;
  out["schema"] = "stegodna-summary-1";
  out["groups"] = nlohmann::json::array();
  for (const auto& [key, by_rate] : groups) {
    nlohmann::json group{{"detector", key.first}, {"region", key.second}};
    group["rates"] = nlohmann::json::array();
    for (const auto& [rate, cells] : by_rate) {
      std::vector<double> diffs;
      double det_sum = 0.0, fpr_sum = 0.0;
      std::size_t na = 0;
      for (const ResultRecord* r : cells) {
        if (std::isnan(r->accuracy_diff)) {
          ++na;
          continue;
        }
        diffs.push_back(r->accuracy_diff);
        det_sum += r->detection_rate;
        fpr_sum += r->false_positive_rate;
      }
      nlohmann::json entry{{"rate", rate}, {"cells", cells.size()}, {"na_cells", na}};
      if (!diffs.empty()) {
        const double n = static_cast<double>(diffs.size());
        double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / n;
        double var = 0.0;
        for (double d : diffs) var += (d - mean) * (d - mean);
        entry["mean_accuracy_diff"] = mean;
        entry["std_accuracy_diff"] = std::sqrt(var / n);
        entry["mean_detection_rate"] = det_sum / n;
        entry["mean_false_positive_rate"] = fpr_sum / n;
      } else {
        entry["mean_accuracy_diff"] = nullptr;
        entry["std_accuracy_diff"] = nullptr;
        entry["mean_detection_rate"] = nullptr;
        entry["mean_false_positive_rate"] = nullptr;
      }
      group["rates"].push_back(entry);
    }
    out["groups"].push_back(group);
  }
  return out;
}

std::size_t emit_results(const std::vector<ResultRecord>& records,
                         const std::filesystem::path& out_dir) {
  if (records.empty()) throw std::invalid_argument("emit_results: no records");
  std::filesystem::create_directories(out_dir);
  std::vector<ResultRecord> sorted = records;
  sort_records(sorted);
  write_file_if_changed(out_dir / "results.csv", results_csv_text(sorted));
  write_file_if_changed(out_dir / "summary.json", summary_json(sorted).dump(2) + "\n");
  std::size_t warnings = 0;
  for (const auto& r : sorted) {
    if (std::isnan(r.accuracy_diff) || std::isnan(r.accuracy_clean)) ++warnings;
  }
  return warnings;
}

}  // namespace stegodna

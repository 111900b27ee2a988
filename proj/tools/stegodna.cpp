#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stegodna/detector.hpp"
#include "stegodna/experiment.hpp"
#include "stegodna/fasta.hpp"
#include "stegodna/infotheory.hpp"
#include "stegodna/labeling.hpp"
#include "stegodna/model.hpp"
#include "stegodna/stego.hpp"
#include "stegodna/synthetic.hpp"
#include "stegodna/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stegodna;

namespace {

// Exit codes: 0 success, 1 configuration error, 2 runtime failure.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

std::vector<DnaSequence> windowed(const std::vector<DnaSequence>& seqs, std::size_t window) {
  std::vector<DnaSequence> out;
  for (const auto& seq : seqs) {
    if (seq.bases.size() <= window) {
      out.push_back(seq);
    } else {
      auto tiles = chop_windows(seq, window);
      out.insert(out.end(), tiles.begin(), tiles.end());
    }
  }
  return out;
}

// Shared "corpus" JSON stanza: {"synthetic": {...}} or
// {"fasta": path, "intervals": path}.
Corpus load_corpus(const json& stanza, std::size_t window) {
  Corpus corpus;
  if (stanza.contains("synthetic")) {
    corpus = generate_synthetic(synthetic_spec_from_json(stanza.at("synthetic")));
    corpus.sequences = windowed(corpus.sequences, window);
    return corpus;
  }
  if (!stanza.contains("fasta")) {
    throw ConfigError("corpus stanza needs either 'synthetic' or 'fasta'");
  }
  corpus.source = CorpusSource::fasta;
  auto seqs = parse_fasta_file(stanza.at("fasta").get<std::string>());
  if (stanza.contains("intervals")) {
    auto intervals = read_interval_csv_file(stanza.at("intervals").get<std::string>());
    for (const auto& seq : seqs) {
      auto it = intervals.find(seq.id);
      const std::vector<Interval> none;
      auto labeled = label_by_intervals(seq, it == intervals.end() ? none : it->second, window);
      corpus.sequences.insert(corpus.sequences.end(), labeled.begin(), labeled.end());
    }
  } else {
    corpus.sequences = windowed(seqs, window);
  }
  return corpus;
}

BitString text_to_bits(const std::string& text) {
  BitString bits;
  for (unsigned char byte : text) {
    for (int shift = 7; shift >= 0; --shift) {
      bits.push_back((byte >> shift) & 1);
    }
  }
  return bits;
}

std::string bits_to_text(const BitString& bits) {
  if (bits.size() % 8 != 0) return {};
  std::string text;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      byte = static_cast<unsigned char>((byte << 1) | bits[i + j]);
    }
    text.push_back(static_cast<char>(byte));
  }
  return text;
}

void write_positions_csv(const std::string& path, const std::string& seq_id,
                         const DnaSequence& original, const EmbedResult& result,
                         bool insertion) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write positions CSV: " + path);
  if (out.tellp() == 0) out << "seq_id,position,original,replacement\n";
  for (std::size_t pos : result.modified_positions) {
    const char repl = result.stego_sequence.bases[pos];
    if (insertion) {
      out << seq_id << ',' << pos << ",-," << repl << '\n';
    } else {
      out << seq_id << ',' << pos << ',' << original.bases[pos] << ',' << repl << '\n';
    }
  }
}

int cmd_gen(const std::string& config_path, const std::string& out_path,
            std::optional<std::uint64_t> seed) {
  json j = load_json_file(config_path);
  SyntheticSpec spec = synthetic_spec_from_json(j);
  if (seed) spec.seed = *seed;
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Corpus corpus = generate_synthetic(spec);
  write_fasta_file(out_path, corpus.sequences);
  std::cout << "wrote " << corpus.sequences.size() << " sequences to " << out_path << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed, bool verbose) {
  json j = load_json_file(config_path);
  if (!j.contains("corpus")) throw ConfigError("train config needs a 'corpus' stanza");
  const std::size_t window = j.value("window", std::size_t{100});
  TrainConfig cfg =
      j.contains("train") ? train_config_from_json(j.at("train")) : TrainConfig{};
  if (seed) cfg.seed = *seed;
  const bool pretrain = j.value("pretrain", true);

  Corpus corpus = load_corpus(j.at("corpus"), window);
  if (!corpus.has_both_labels()) {
    throw ConfigError("training corpus must contain intron and exon sequences");
  }

  const LstmParams* encoder = nullptr;
  AutoencoderModel ae;
  if (pretrain) {
    ae = autoencode_train(corpus, cfg);
    encoder = &ae.encoder;
    std::cout << "autoencoder: initial loss " << ae.initial_loss << ", final loss "
              << (ae.epoch_loss.empty() ? ae.initial_loss : ae.epoch_loss.back()) << "\n";
  }
  TrainedClassifier trained = train_classifier(corpus, encoder, cfg);
  if (!trained.epoch_loss.empty()) {
    std::cout << "classifier: epoch-1 loss " << trained.epoch_loss.front()
              << ", final loss " << trained.epoch_loss.back() << "\n";
  }
  if (verbose) {
    for (std::size_t e = 0; e < trained.epoch_loss.size(); ++e) {
      std::cout << "  epoch " << (e + 1) << ": " << trained.epoch_loss[e] << "\n";
    }
  }
  save_model(trained.model, out_path);
  std::cout << "saved model to " << out_path << "\n";
  return 0;
}

int cmd_calibrate(const std::string& model_path, const std::string& in_path,
                  const std::string& region, const std::string& out_path) {
  SteganalysisModel model = load_model(model_path);
  auto clean = read_labeled_fasta_file(in_path);
  LabelContext context = label_context_from_string(region);
  Calibration cal = calibrate(model, clean, context);
  json j{{"mean_score", cal.mean_score},
         {"epsilon", cal.epsilon},
         {"sample_count", cal.sample_count},
         {"label_context", to_string(cal.label_context)}};
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write calibration: " + out_path);
  out << j.dump(2) << "\n";
  std::cout << "calibration: mean " << cal.mean_score << ", epsilon " << cal.epsilon
            << " over " << cal.sample_count << " sequences\n";
  return 0;
}

int cmd_detect(const std::string& model_path, const std::string& cal_path,
               const std::string& in_path, const std::string& out_path) {
  SteganalysisModel model = load_model(model_path);
  json cal_json = load_json_file(cal_path);
  Calibration cal{cal_json.at("mean_score").get<double>(),
                  cal_json.at("epsilon").get<double>(),
                  cal_json.at("sample_count").get<std::size_t>(),
                  label_context_from_string(
                      cal_json.value("label_context", std::string("mixed")))};
  auto suspects = read_labeled_fasta_file(in_path);
  auto detections = scan(model, cal, suspects);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write detections: " + out_path);
  write_detections_csv(out, detections);
  std::size_t flagged = 0;
  for (const auto& d : detections) flagged += d.flagged ? 1 : 0;
  std::cout << flagged << " of " << detections.size() << " sequences flagged\n";
  return 0;
}

struct EmbedArgs {
  std::string scheme = "keybits";
  std::size_t key_length = 3;
  std::string message;
  std::string message_bits;
  std::string in_path, out_path, positions_path;
};

int cmd_embed(const EmbedArgs& args) {
  const SchemeKind kind = scheme_kind_from_string(args.scheme);
  if (args.message.empty() && args.message_bits.empty()) {
    throw ConfigError("embed needs --message or --message-bits");
  }
  auto cover = read_labeled_fasta_file(args.in_path);
  if (!args.positions_path.empty()) fs::remove(args.positions_path);

  std::vector<DnaSequence> stego;
  for (const auto& seq : cover) {
    switch (kind) {
      case SchemeKind::keybits: {
        BitString message = args.message_bits.empty()
                                ? text_to_bits(args.message)
                                : BitString::from_string(args.message_bits);
        if (message.size() % 2 != 0) {
          throw ConfigError("keybits message must have an even bit count to stay mappable");
        }
        BitString bits = embed_keybits(dna_to_bits(seq), message, args.key_length);
        DnaSequence s = bits_to_dna(bits, seq.id);
        s.label = seq.label;
        if (!args.positions_path.empty()) {
          EmbedResult result;
          result.stego_sequence = s;
          for (std::size_t i = 0; i < message.size(); ++i) {
            result.modified_positions.push_back(i * (args.key_length + 1) / 2);
          }
          write_positions_csv(args.positions_path, seq.id, seq, result, true);
        }
        stego.push_back(std::move(s));
        break;
      }
      case SchemeKind::ascii:
      case SchemeKind::fivebit: {
        DnaSequence payload = kind == SchemeKind::ascii ? encode_ascii(args.message)
                                                        : encode_fivebit(args.message);
        DnaSequence s = seq;
        s.bases += payload.bases;
        if (!args.positions_path.empty()) {
          EmbedResult result;
          result.stego_sequence = s;
          for (std::size_t i = seq.bases.size(); i < s.bases.size(); ++i) {
            result.modified_positions.push_back(i);
          }
          write_positions_csv(args.positions_path, seq.id, seq, result, true);
        }
        stego.push_back(std::move(s));
        break;
      }
      case SchemeKind::codon: {
        BitString message = args.message_bits.empty()
                                ? text_to_bits(args.message)
                                : BitString::from_string(args.message_bits);
        EmbedResult result = embed_codon(seq, message, standard_codon_table());
        result.stego_sequence.label = seq.label;
        if (!args.positions_path.empty()) {
          write_positions_csv(args.positions_path, seq.id, seq, result, false);
        }
        stego.push_back(result.stego_sequence);
        break;
      }
    }
  }
  write_fasta_file(args.out_path, stego);
  std::cout << "embedded into " << stego.size() << " sequences -> " << args.out_path << "\n";
  return 0;
}

struct ExtractArgs {
  std::string scheme = "keybits";
  std::size_t key_length = 3;
  std::size_t message_length = 0;  // bits for keybits/codon, characters otherwise
  std::string in_path, out_path;
  bool as_bits = false;
};

int cmd_extract(const ExtractArgs& args) {
  const SchemeKind kind = scheme_kind_from_string(args.scheme);
  auto stego = read_labeled_fasta_file(args.in_path);
  std::ostringstream out;
  for (const auto& seq : stego) {
    std::string recovered;
    switch (kind) {
      case SchemeKind::keybits: {
        BitString message =
            extract_keybits(dna_to_bits(seq), args.message_length, args.key_length);
        recovered = args.as_bits ? message.str() : bits_to_text(message);
        if (recovered.empty() && !message.empty()) recovered = message.str();
        break;
      }
      case SchemeKind::ascii: {
        const std::size_t payload_nt = args.message_length * 4;
        if (payload_nt > seq.bases.size()) {
          throw ConfigError("sequence '" + seq.id + "' shorter than the claimed payload");
        }
        DnaSequence payload{seq.id, seq.bases.substr(seq.bases.size() - payload_nt),
                            seq.label};
        recovered = payload.bases.empty() ? "" : decode_ascii(payload);
        break;
      }
      case SchemeKind::fivebit: {
        const std::size_t bits = args.message_length * 5;
        const std::size_t payload_nt = (bits + bits % 2) / 2;
        if (payload_nt > seq.bases.size()) {
          throw ConfigError("sequence '" + seq.id + "' shorter than the claimed payload");
        }
        DnaSequence payload{seq.id, seq.bases.substr(seq.bases.size() - payload_nt),
                            seq.label};
        recovered = payload.bases.empty() ? "" : decode_fivebit(payload);
        break;
      }
      case SchemeKind::codon: {
        BitString message = extract_codon(seq, args.message_length, standard_codon_table());
        recovered = args.as_bits ? message.str() : bits_to_text(message);
        if (recovered.empty() && !message.empty()) recovered = message.str();
        break;
      }
    }
    out << seq.id << '\t' << recovered << '\n';
  }
  if (args.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(args.out_path);
    if (!file) throw std::runtime_error("cannot write " + args.out_path);
    file << out.str();
    std::cout << "extracted " << stego.size() << " messages -> " << args.out_path << "\n";
  }
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed, bool verbose) {
  json j = load_json_file(config_path);
  ExperimentConfig cfg = experiment_config_from_json(j);
  if (seed) cfg.seed = *seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto records = run_experiment(cfg, out_dir);
  if (verbose) {
    std::cout << results_csv_text(records);
  }
  std::size_t na = 0;
  for (const auto& r : records) {
    if (std::isnan(r.accuracy_diff)) ++na;
  }
  std::cout << records.size() << " cells -> " << out_dir << "/results.csv";
  if (na > 0) std::cout << " (" << na << " diverged cells written as NA)";
  std::cout << "\n";
  return 0;
}

std::vector<ResultRecord> parse_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("results CSV is empty");
  std::vector<ResultRecord> records;
  auto field = [](std::stringstream& row) {
    std::string f;
    std::getline(row, f, ',');
    return f;
  };
  auto num = [](const std::string& f) {
    return f == "NA" ? std::numeric_limits<double>::quiet_NaN() : std::stod(f);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    ResultRecord r;
    r.detector = field(row);
    r.region = field(row);
    r.length = std::stoull(field(row));
    r.rate = num(field(row));
    r.fold = std::stoull(field(row));
    r.accuracy_clean = num(field(row));
    r.accuracy_stego = num(field(row));
    r.accuracy_diff = num(field(row));
    r.detection_rate = num(field(row));
    r.false_positive_rate = num(field(row));
    records.push_back(r);
  }
  return records;
}

int cmd_report(const std::string& in_dir, const std::string& out_path) {
  auto records = parse_results_csv((fs::path(in_dir) / "results.csv").string());
  if (records.empty()) throw ConfigError("no records in " + in_dir);
  json summary = summary_json(records);
  const std::string path =
      out_path.empty() ? (fs::path(in_dir) / "summary.json").string() : out_path;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << summary.dump(2) << "\n";

  std::cout << "detector  region  rate      mean_diff   std_diff\n";
  for (const auto& group : summary.at("groups")) {
    for (const auto& entry : group.at("rates")) {
      char buf[128];
      if (entry.at("mean_accuracy_diff").is_null()) {
        std::snprintf(buf, sizeof buf, "%-9s %-7s %-9.4f %-11s %s",
                      group.at("detector").get<std::string>().c_str(),
                      group.at("region").get<std::string>().c_str(),
                      entry.at("rate").get<double>(), "NA", "NA");
      } else {
        std::snprintf(buf, sizeof buf, "%-9s %-7s %-9.4f %-11.4f %.4f",
                      group.at("detector").get<std::string>().c_str(),
                      group.at("region").get<std::string>().c_str(),
                      entry.at("rate").get<double>(),
                      entry.at("mean_accuracy_diff").get<double>(),
                      entry.at("std_accuracy_diff").get<double>());
      }
      std::cout << buf << "\n";
    }
  }
  return 0;
}

int cmd_entropy(const std::string& clean_path, const std::string& stego_path,
                std::size_t k, const std::string& out_path) {
  Corpus clean, stego;
  clean.sequences = read_labeled_fasta_file(clean_path);
  stego.sequences = read_labeled_fasta_file(stego_path);
  auto report = security_report(clean, stego, k);
  json j = to_json(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DNA steganography toolkit and sequence-learning steganalysis"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);

  bool verbose = false;
  app.add_flag("--verbose", verbose, "verbose output");

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "override the config seed");

  std::string config_path, out_path, in_path, model_path, cal_path, region = "mixed";
  std::size_t kmer_k = 3;

  auto* gen = app.add_subcommand("gen", "generate a labeled synthetic corpus");
  gen->add_option("--config", config_path, "SyntheticSpec JSON")->required();
  gen->add_option("--out", out_path, "output FASTA")->required();

  auto* train = app.add_subcommand("train", "pretrain + train the steganalysis model");
  train->add_option("--config", config_path, "train config JSON")->required();
  train->add_option("--out", out_path, "model checkpoint path")->required();

  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit the clean-score band");
  calibrate_cmd->add_option("--model", model_path)->required();
  calibrate_cmd->add_option("--in", in_path, "clean labeled FASTA")->required();
  calibrate_cmd->add_option("--region", region, "intron|exon|mixed");
  calibrate_cmd->add_option("--out", out_path, "calibration JSON")->required();

  auto* detect_cmd = app.add_subcommand("detect", "scan suspect sequences");
  detect_cmd->add_option("--model", model_path)->required();
  detect_cmd->add_option("--calibration", cal_path)->required();
  detect_cmd->add_option("--in", in_path, "suspects FASTA")->required();
  detect_cmd->add_option("--out", out_path, "detections CSV")->required();

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "hide a message in cover sequences");
  embed->add_option("--scheme", embed_args.scheme, "keybits|ascii|fivebit|codon");
  embed->add_option("--key-length", embed_args.key_length, "keybits segment length");
  embed->add_option("--message", embed_args.message, "message text");
  embed->add_option("--message-bits", embed_args.message_bits, "raw 0/1 message");
  embed->add_option("--in", embed_args.in_path, "cover FASTA")->required();
  embed->add_option("--out", embed_args.out_path, "stego FASTA")->required();
  embed->add_option("--positions", embed_args.positions_path, "modified-positions CSV");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "recover a hidden message");
  extract->add_option("--scheme", extract_args.scheme, "keybits|ascii|fivebit|codon");
  extract->add_option("--key-length", extract_args.key_length);
  extract
      ->add_option("--message-length", extract_args.message_length,
                   "bits for keybits/codon, characters for ascii/fivebit")
      ->required();
  extract->add_option("--in", extract_args.in_path, "stego FASTA")->required();
  extract->add_option("--out", extract_args.out_path, "output file (default stdout)");
  extract->add_flag("--bits", extract_args.as_bits, "emit raw bits, not text");

  auto* experiment = app.add_subcommand("experiment", "run the detection sweep");
  experiment->add_option("--config", config_path, "ExperimentConfig JSON")->required();
  experiment->add_option("--out", out_path, "output directory")->required();

  auto* report = app.add_subcommand("report", "re-aggregate an experiment directory");
  report->add_option("--in", in_path, "experiment directory")->required();
  report->add_option("--out", out_path, "summary JSON (default <dir>/summary.json)");

  std::string clean_path, stego_path;
  auto* entropy_cmd = app.add_subcommand("entropy", "k-mer entropy security report");
  entropy_cmd->add_option("--clean", clean_path)->required();
  entropy_cmd->add_option("--stego", stego_path)->required();
  entropy_cmd->add_option("--k", kmer_k, "k-mer length (default 3)");
  entropy_cmd->add_option("--out", out_path, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(config_path, out_path, seed);
    if (train->parsed()) return cmd_train(config_path, out_path, seed, verbose);
    if (calibrate_cmd->parsed()) return cmd_calibrate(model_path, in_path, region, out_path);
    if (detect_cmd->parsed()) return cmd_detect(model_path, cal_path, in_path, out_path);
    if (embed->parsed()) return cmd_embed(embed_args);
    if (extract->parsed()) return cmd_extract(extract_args);
    if (experiment->parsed()) return cmd_experiment(config_path, out_path, seed, verbose);
    if (report->parsed()) return cmd_report(in_path, out_path);
    if (entropy_cmd->parsed()) return cmd_entropy(clean_path, stego_path, kmer_k, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "stegodna/synthetic.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "stegodna/rng.hpp"

namespace stegodna {

namespace {

std::size_t num_contexts(int order) {
  std::size_t n = 1;
  for (int i = 0; i < order; ++i) n *= 4;
  return n;
}

void check_matrix(const std::vector<std::vector<double>>& rows, std::size_t contexts,
                  const char* which) {
  if (rows.size() != contexts) {
    throw std::invalid_argument(std::string(which) + "_transitions must have 4^order rows");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 4) {
      throw std::invalid_argument(std::string(which) + "_transitions row " +
                                  std::to_string(r) + " must have 4 entries");
    }
    double sum = 0.0;
    for (double p : rows[r]) {
      if (p < 0.0) {
        throw std::invalid_argument(std::string(which) + "_transitions row " +
                                    std::to_string(r) + " has a negative entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string(which) + "_transitions row " +
                                  std::to_string(r) + " does not sum to 1");
    }
  }
}

int sample_row(const std::vector<double>& row, std::mt19937_64& g) {
  double u = uniform_unit(g);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    acc += row[i];
    if (u < acc) return i;
  }
  return 3;
}

DnaSequence generate_one(const SyntheticSpec& spec,
                         const std::vector<std::vector<double>>& rows, Label label,
                         std::size_t index) {
  const std::size_t contexts = num_contexts(spec.markov_order);
  auto g = substream(spec.seed, std::string("corpus/") + to_string(label) + "/" +
                                    std::to_string(index));
  DnaSequence seq;
  seq.id = std::string(to_string(label)) + "_" + std::to_string(index);
  seq.label = label;
  seq.bases.reserve(spec.seq_length);

  std::size_t context = 0;
  for (std::size_t pos = 0; pos < spec.seq_length; ++pos) {
    int next;
    if (pos < static_cast<std::size_t>(spec.markov_order)) {
      next = static_cast<int>(uniform_index(g, 4));  // seed the context uniformly
    } else {
      next = sample_row(rows[context], g);
    }
    seq.bases.push_back(index_base(next));
    context = (context * 4 + static_cast<std::size_t>(next)) % contexts;
  }
  return seq;
}

}  // namespace

double max_row_tv_distance(const SyntheticSpec& spec) {
  double best = 0.0;
  for (std::size_t r = 0; r < spec.intron_transitions.size(); ++r) {
    double tv = 0.0;
    for (int c = 0; c < 4; ++c) {
      tv += std::abs(spec.intron_transitions[r][c] - spec.exon_transitions[r][c]);
    }
    best = std::max(best, 0.5 * tv);
  }
  return best;
}

void validate(const SyntheticSpec& spec) {
  if (spec.markov_order < 1) throw std::invalid_argument("markov_order must be >= 1");
  if (spec.seq_length == 0) throw std::invalid_argument("seq_length must be positive");
  if (spec.count_per_class == 0) throw std::invalid_argument("count_per_class must be positive");
  const std::size_t contexts = num_contexts(spec.markov_order);
  check_matrix(spec.intron_transitions, contexts, "intron");
  check_matrix(spec.exon_transitions, contexts, "exon");
  if (max_row_tv_distance(spec) < 0.05) {
    throw std::invalid_argument("intron and exon chains are too similar (row TV < 0.05)");
  }
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  Corpus corpus;
  corpus.source = CorpusSource::synthetic;
  corpus.sequences.reserve(2 * spec.count_per_class);
  for (std::size_t i = 0; i < spec.count_per_class; ++i) {
    corpus.sequences.push_back(generate_one(spec, spec.intron_transitions, Label::intron, i));
  }
  for (std::size_t i = 0; i < spec.count_per_class; ++i) {
    corpus.sequences.push_back(generate_one(spec, spec.exon_transitions, Label::exon, i));
  }
  return corpus;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  spec.markov_order = j.value("markov_order", 1);
  spec.intron_transitions = j.at("intron_transitions").get<std::vector<std::vector<double>>>();
  spec.exon_transitions = j.at("exon_transitions").get<std::vector<std::vector<double>>>();
  spec.seq_length = j.at("seq_length").get<std::size_t>();
  spec.count_per_class = j.at("count_per_class").get<std::size_t>();
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

nlohmann::json to_json(const SyntheticSpec& spec) {
  return nlohmann::json{{"markov_order", spec.markov_order},
                        {"intron_transitions", spec.intron_transitions},
                        {"exon_transitions", spec.exon_transitions},
                        {"seq_length", spec.seq_length},
                        {"count_per_class", spec.count_per_class},
                        {"seed", spec.seed}};
}

SyntheticSpec default_synthetic_spec(std::uint64_t seed, std::size_t seq_length,
                                     std::size_t count_per_class) {
  SyntheticSpec spec;
  spec.markov_order = 1;
  // Intron chain favors staying on the current base; exon chain favors
  // stepping to the next one. Row TV distance 0.35.
  spec.intron_transitions = {{0.55, 0.15, 0.15, 0.15},
                             {0.15, 0.55, 0.15, 0.15},
                             {0.15, 0.15, 0.55, 0.15},
                             {0.15, 0.15, 0.15, 0.55}};
  spec.exon_transitions = {{0.20, 0.50, 0.15, 0.15},
                           {0.15, 0.20, 0.50, 0.15},
                           {0.15, 0.15, 0.20, 0.50},
                           {0.50, 0.15, 0.15, 0.20}};
  spec.seq_length = seq_length;
  spec.count_per_class = count_per_class;
  spec.seed = seed;
  return spec;
}

}  // namespace stegodna

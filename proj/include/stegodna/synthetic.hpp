#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "stegodna/dna.hpp"

namespace stegodna {

// Desk-scale corpus generator: one Markov chain per class over {A,C,G,T}.
// Transition matrices have 4^markov_order rows (context in base-4, A=0..T=3)
// and 4 columns.
struct SyntheticSpec {
  int markov_order = 1;
  std::vector<std::vector<double>> intron_transitions;
  std::vector<std::vector<double>> exon_transitions;
  std::size_t seq_length = 100;
  std::size_t count_per_class = 100;
  std::uint64_t seed = 0;
};

// Largest row-wise total-variation distance between the two chains.
double max_row_tv_distance(const SyntheticSpec& spec);

// Throws std::invalid_argument unless rows are stochastic (sum 1 within
// 1e-9) and the chains differ by TV >= 0.05 in at least one row.
void validate(const SyntheticSpec& spec);

// count_per_class sequences per label, deterministic per spec.seed.
Corpus generate_synthetic(const SyntheticSpec& spec);

// JSON mirrors the field names above.
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticSpec& spec);

// Order-1 spec with structured, clearly distinct intron/exon chains
// (row TV distance 0.35); the default corpus for demos and experiments.
SyntheticSpec default_synthetic_spec(std::uint64_t seed, std::size_t seq_length = 100,
                                     std::size_t count_per_class = 100);

}  // namespace stegodna

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stegodna/dna.hpp"

namespace stegodna {

// Empirical distribution over k-mer strings. Joint distributions over pairs
// use composite support entries "left|right".
struct EmpiricalDistribution {
  std::vector<std::string> support;
  std::vector<double> probabilities;

  void validate() const;  // non-negative, sums to 1 within 1e-9
};

// Sliding-window k-mer counts over all sequences, normalized.
EmpiricalDistribution kmer_distribution(const std::vector<DnaSequence>& seqs,
                                        std::size_t k);

// H = -sum p log2 p, with 0 log 0 = 0.
double entropy_bits(const EmpiricalDistribution& dist);

// Joint distribution of aligned k-mer pairs from position-matched sequences.
EmpiricalDistribution joint_kmer_distribution(
    const std::vector<std::pair<const DnaSequence*, const DnaSequence*>>& pairs,
    std::size_t k);

EmpiricalDistribution transpose_joint(const EmpiricalDistribution& joint);

// I = H(X) + H(Y) - H(X,Y) over a "x|y" joint.
double mutual_information_bits(const EmpiricalDistribution& joint);

struct SecurityReport {
  std::size_t k = 3;
  double h_clean = 0.0;
  double h_stego = 0.0;
  double delta_h = 0.0;
  double mi = 0.0;  // paired by sequence id; NaN when no ids match
  std::string verdict;
};

// Entropy comparison of the two corpora plus mutual information across
// id-matched pairs; the verdict applies the nonzero-shift criterion.
SecurityReport security_report(const Corpus& clean, const Corpus& stego, std::size_t k);

nlohmann::json to_json(const SecurityReport& report);

}  // namespace stegodna

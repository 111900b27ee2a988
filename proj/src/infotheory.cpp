#include "stegodna/infotheory.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace stegodna {

void EmpiricalDistribution::validate() const {
  if (support.size() != probabilities.size()) {
    throw std::invalid_argument("distribution support/probability size mismatch");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities must sum to 1");
  }
}

namespace {

EmpiricalDistribution from_counts(const std::map<std::string, std::size_t>& counts) {
  EmpiricalDistribution dist;
  std::size_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  dist.support.reserve(counts.size());
  dist.probabilities.reserve(counts.size());
  for (const auto& [kmer, c] : counts) {
    dist.support.push_back(kmer);
    dist.probabilities.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return dist;
}

}  // namespace

EmpiricalDistribution kmer_distribution(const std::vector<DnaSequence>& seqs,
                                        std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (seqs.empty()) throw std::invalid_argument("kmer_distribution: no sequences");
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : seqs) {
    if (seq.bases.size() < k) {
      throw std::invalid_argument("sequence '" + seq.id + "' is shorter than k");
    }
    for (std::size_t i = 0; i + k <= seq.bases.size(); ++i) {
      ++counts[seq.bases.substr(i, k)];
    }
  }
  return from_counts(counts);
}

double entropy_bits(const EmpiricalDistribution& dist) {
  dist.validate();
  double h = 0.0;
  for (double p : dist.probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

EmpiricalDistribution joint_kmer_distribution(
    const std::vector<std::pair<const DnaSequence*, const DnaSequence*>>& pairs,
    std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  std::map<std::string, std::size_t> counts;
  for (const auto& [left, right] : pairs) {
    const std::size_t length = std::min(left->bases.size(), right->bases.size());
    if (length < k) {
      throw std::invalid_argument("paired sequences shorter than k");
    }
    for (std::size_t i = 0; i + k <= length; ++i) {
      ++counts[left->bases.substr(i, k) + "|" + right->bases.substr(i, k)];
    }
  }
  if (counts.empty()) throw std::invalid_argument("no aligned k-mer pairs");
  return from_counts(counts);
}

EmpiricalDistribution transpose_joint(const EmpiricalDistribution& joint) {
  std::map<std::string, double> swapped;
  for (std::size_t i = 0; i < joint.support.size(); ++i) {
    const auto& s = joint.support[i];
    const auto sep = s.find('|');
    if (sep == std::string::npos) {
      throw std::invalid_argument("joint support entry lacks 'x|y' form: " + s);
    }
    swapped[s.substr(sep + 1) + "|" + s.substr(0, sep)] += joint.probabilities[i];
  }
  EmpiricalDistribution out;
  for (const auto& [key, p] : swapped) {
    out.support.push_back(key);
    out.probabilities.push_back(p);
  }
  return out;
}

double mutual_information_bits(const EmpiricalDistribution& joint) {
  joint.validate();
  std::map<std::string, double> px, py;
  double h_joint = 0.0;
  for (std::size_t i = 0; i < joint.support.size(); ++i) {
    const auto& s = joint.support[i];
    const auto sep = s.find('|');
    if (sep == std::string::npos) {
      throw std::invalid_argument("joint support entry lacks 'x|y' form: " + s);
    }
    const double p = joint.probabilities[i];
    px[s.substr(0, sep)] += p;
    py[s.substr(sep + 1)] += p;
    if (p > 0.0) h_joint -= p * std::log2(p);
  }
  double hx = 0.0, hy = 0.0;
  for (const auto& [_, p] : px) {
    if (p > 0.0) hx -= p * std::log2(p);
  }
  for (const auto& [_, p] : py) {
    if (p > 0.0) hy -= p * std::log2(p);
  }
  return hx + hy - h_joint;
}

SecurityReport security_report(const Corpus& clean, const Corpus& stego, std::size_t k) {
  if (clean.sequences.empty() || stego.sequences.empty()) {
    throw std::invalid_argument("security_report: both corpora must be non-empty");
  }
  SecurityReport report;
  report.k = k;
  report.h_clean = entropy_bits(kmer_distribution(clean.sequences, k));
  report.h_stego = entropy_bits(kmer_distribution(stego.sequences, k));
  report.delta_h = std::abs(report.h_clean - report.h_stego);

  std::vector<std::pair<const DnaSequence*, const DnaSequence*>> pairs;
  for (const auto& c : clean.sequences) {
    for (const auto& s : stego.sequences) {
      if (c.id == s.id) {
        pairs.emplace_back(&c, &s);
        break;
      }
    }
  }
  report.mi = pairs.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : mutual_information_bits(joint_kmer_distribution(pairs, k));

  if (report.delta_h > 1e-9) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "not secure: k-mer entropy shifted by %.4f bits at k=%zu", report.delta_h,
                  k);
    report.verdict = buf;
  } else {
    report.verdict = "indistinguishable at k=" + std::to_string(k) +
                     ": no k-mer entropy shift";
  }
  return report;
}

nlohmann::json to_json(const SecurityReport& report) {
  nlohmann::json j{{"k", report.k},
                   {"h_clean", report.h_clean},
                   {"h_stego", report.h_stego},
                   {"delta_h", report.delta_h},
                   {"verdict", report.verdict}};
  if (std::isnan(report.mi)) {
    j["mi"] = nullptr;
  } else {
    j["mi"] = report.mi;
  }
  return j;
}

}  // namespace stegodna

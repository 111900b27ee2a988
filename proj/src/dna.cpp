#include "stegodna/dna.hpp"

#include <stdexcept>

namespace stegodna {

const char* to_string(Label label) {
  switch (label) {
    case Label::intron: return "intron";
    case Label::exon: return "exon";
    default: return "unknown";
  }
}

Label label_from_string(std::string_view s) {
  if (s == "intron") return Label::intron;
  if (s == "exon") return Label::exon;
  if (s == "unknown") return Label::unknown;
  throw std::invalid_argument("unknown label: " + std::string(s));
}

void validate_sequence(const DnaSequence& seq) {
  if (seq.bases.empty()) {
    throw std::invalid_argument("sequence '" + seq.id + "' is empty");
  }
  for (char c : seq.bases) {
    if (!is_valid_base(c)) {
      throw std::invalid_argument("sequence '" + seq.id +
                                  "' contains non-ACGT character '" +
                                  std::string(1, c) + "'");
    }
  }
}

std::size_t Corpus::count(Label label) const {
  std::size_t n = 0;
  for (const auto& s : sequences) {
    if (s.label == label) ++n;
  }
  return n;
}

std::vector<DnaSequence> chop_windows(const DnaSequence& seq, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window must be positive");
  std::vector<DnaSequence> out;
  for (std::size_t start = 0; start + window <= seq.bases.size(); start += window) {
    out.push_back(DnaSequence{seq.id + "__w" + std::to_string(start),
                              seq.bases.substr(start, window), seq.label});
  }
  return out;
}

}  // namespace stegodna

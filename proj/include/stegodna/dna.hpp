#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace stegodna {

enum class Label { intron, exon, unknown };

const char* to_string(Label label);
Label label_from_string(std::string_view s);

// A labeled nucleotide string over {A,C,G,T}, uppercase canonical form.
struct DnaSequence {
  std::string id;
  std::string bases;
  Label label = Label::unknown;

  bool operator==(const DnaSequence&) const = default;
};

inline bool is_valid_base(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

// A=0, C=1, G=2, T=3; -1 for anything else.
inline int base_index(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

inline char index_base(int i) { return "ACGT"[i]; }

// Throws std::invalid_argument on empty or non-ACGT content.
void validate_sequence(const DnaSequence& seq);

enum class Split { train, validation, test };
enum class CorpusSource { fasta, synthetic };

struct Corpus {
  std::vector<DnaSequence> sequences;
  Split split = Split::train;
  CorpusSource source = CorpusSource::synthetic;

  std::size_t count(Label label) const;
  bool has_both_labels() const {
    return count(Label::intron) > 0 && count(Label::exon) > 0;
  }
};

// Non-overlapping tiles of length `window`; the tail shorter than `window`
// is dropped. Labels are inherited from the parent sequence.
std::vector<DnaSequence> chop_windows(const DnaSequence& seq, std::size_t window);

}  // namespace stegodna

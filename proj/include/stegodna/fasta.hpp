#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stegodna/dna.hpp"

namespace stegodna {

// What to do with characters outside {A,C,G,T} (e.g. N) in FASTA input.
enum class NonAcgtPolicy { reject, drop };

// Reads FASTA text. Record id = header token up to the first whitespace,
// bases uppercased, label left unknown. Under `reject` (default) a record
// with a disallowed character raises an error naming the record; under
// `drop` the characters are removed.
std::vector<DnaSequence> parse_fasta(std::istream& in,
                                     NonAcgtPolicy policy = NonAcgtPolicy::reject);
std::vector<DnaSequence> parse_fasta_file(const std::string& path,
                                          NonAcgtPolicy policy = NonAcgtPolicy::reject);

// Writes one record per sequence. A known label is carried in the header
// description as "label=intron" / "label=exon" so a corpus round-trips.
void write_fasta(std::ostream& out, const std::vector<DnaSequence>& seqs,
                 std::size_t line_width = 70);
void write_fasta_file(const std::string& path, const std::vector<DnaSequence>& seqs,
                      std::size_t line_width = 70);

// parse_fasta plus restoring labels from "label=..." header annotations.
std::vector<DnaSequence> read_labeled_fasta(std::istream& in,
                                            NonAcgtPolicy policy = NonAcgtPolicy::reject);
std::vector<DnaSequence> read_labeled_fasta_file(const std::string& path,
                                                 NonAcgtPolicy policy = NonAcgtPolicy::reject);

}  // namespace stegodna

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stegodna/bitstring.hpp"
#include "stegodna/dna.hpp"

namespace stegodna {

enum class SchemeKind { keybits, ascii, fivebit, codon };

const char* to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view s);

// Codon (3-base string) -> amino acid letter, '*' for stop.
using CodonTable = std::map<std::string, char>;
const CodonTable& standard_codon_table();

struct StegoScheme {
  SchemeKind kind = SchemeKind::keybits;
  std::size_t key_length = 3;   // keybits only
  CodonTable codon_table;       // codon only; empty means the standard table
};

struct EmbedResult {
  DnaSequence stego_sequence;
  std::vector<std::size_t> modified_positions;
  std::size_t capacity_used_bits = 0;
};

// 2-bit codec: A=00, C=01, G=10, T=11.
BitString dna_to_bits(const DnaSequence& seq);
DnaSequence bits_to_dna(const BitString& bits, std::string id = "");

// Splits `cover` into consecutive key_length segments (trailing remainder
// untouched) and prepends message bit i to segment i.
BitString embed_keybits(const BitString& cover, const BitString& message,
                        std::size_t key_length);
BitString extract_keybits(const BitString& stego, std::size_t message_length,
                          std::size_t key_length);

// Each byte -> 8 bits (MSB first) -> 4 nucleotides.
DnaSequence encode_ascii(std::string_view text, std::string id = "");
std::string decode_ascii(const DnaSequence& seq);

// 32-symbol alphabet: A..Z then space . , - ? ! ; 5 bits per symbol
// (MSB first), zero-padded to even bit count, then the 2-bit codec.
std::string_view fivebit_alphabet();
DnaSequence encode_fivebit(std::string_view text, std::string id = "");
std::string decode_fivebit(const DnaSequence& seq);

// Synonymous-codon watermarking over an in-frame coding sequence. For each
// codon, S = lexicographically sorted synonym set of its amino acid and
// c = 2^floor(log2 |S|); when c >= 2 the next floor(log2 |S|) message bits
// (MSB first) index into the first c codons of S. Translation is preserved.
std::size_t codon_capacity_bits(const DnaSequence& cover, const CodonTable& table);
EmbedResult embed_codon(const DnaSequence& cover, const BitString& message,
                        const CodonTable& table);
BitString extract_codon(const DnaSequence& stego, std::size_t message_length,
                        const CodonTable& table);

// Amino-acid string of an in-frame sequence.
std::string translate(const DnaSequence& seq, const CodonTable& table);

// Substitutes exactly ceil(rate * length) distinct positions, each with a
// uniformly chosen different base. Deterministic per seed.
EmbedResult perturb(const DnaSequence& seq, double rate, std::uint64_t seed);

}  // namespace stegodna

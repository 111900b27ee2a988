#include "stegodna/stego.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stegodna/rng.hpp"

namespace stegodna {

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::keybits: return "keybits";
    case SchemeKind::ascii: return "ascii";
    case SchemeKind::fivebit: return "fivebit";
    case SchemeKind::codon: return "codon";
  }
  return "keybits";
}

SchemeKind scheme_kind_from_string(std::string_view s) {
  if (s == "keybits") return SchemeKind::keybits;
  if (s == "ascii") return SchemeKind::ascii;
  if (s == "fivebit") return SchemeKind::fivebit;
  if (s == "codon") return SchemeKind::codon;
  throw std::invalid_argument("unknown scheme kind: " + std::string(s));
}

const CodonTable& standard_codon_table() {
  static const CodonTable table = [] {
    // 64 codons in TCAG-major order, amino letters in matching order.
    static const char* bases = "TCAG";
    static const char* aminos =
        "FFLLSSSSYY**CC*W"   // TTT..TGG
        "LLLLPPPPHHQQRRRR"   // CTT..CGG
        "IIIMTTTTNNKKSSRR"   // ATT..AGG
        "VVVVAAAADDEEGGGG";  // GTT..GGG
    CodonTable t;
    int idx = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int c = 0; c < 4; ++c) {
          std::string codon{bases[a], bases[b], bases[c]};
          t[codon] = aminos[idx++];
        }
      }
    }
    return t;
  }();
  return table;
}

BitString dna_to_bits(const DnaSequence& seq) {
  validate_sequence(seq);
  BitString out;
  out.bits.reserve(2 * seq.bases.size());
  for (char c : seq.bases) {
    int v = base_index(c);
    out.bits.push_back(static_cast<std::uint8_t>((v >> 1) & 1));
    out.bits.push_back(static_cast<std::uint8_t>(v & 1));
  }
  return out;
}

DnaSequence bits_to_dna(const BitString& bits, std::string id) {
  if (bits.size() % 2 != 0) {
    throw std::invalid_argument("bit length must be even to map to nucleotides");
  }
  DnaSequence seq;
  seq.id = std::move(id);
  seq.bases.reserve(bits.size() / 2);
  for (std::size_t i = 0; i < bits.size(); i += 2) {
    seq.bases.push_back(index_base((bits[i] << 1) | bits[i + 1]));
  }
  return seq;
}

BitString embed_keybits(const BitString& cover, const BitString& message,
                        std::size_t key_length) {
  if (key_length == 0) throw std::invalid_argument("key_length must be positive");
  const std::size_t segments = cover.size() / key_length;
  if (segments < message.size()) {
    throw std::invalid_argument("cover has " + std::to_string(segments) +
                                " key segments, message needs " +
                                std::to_string(message.size()));
  }
  BitString out;
  out.bits.reserve(cover.size() + message.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < segments; ++i) {
    if (i < message.size()) out.bits.push_back(message[i]);
    for (std::size_t j = 0; j < key_length; ++j) out.bits.push_back(cover[pos++]);
  }
  while (pos < cover.size()) out.bits.push_back(cover[pos++]);  // remainder
  return out;
}

BitString extract_keybits(const BitString& stego, std::size_t message_length,
                          std::size_t key_length) {
  if (key_length == 0) throw std::invalid_argument("key_length must be positive");
  if (message_length * (key_length + 1) > stego.size()) {
    throw std::invalid_argument("stego stream too short for claimed message length");
  }
  BitString message;
  message.bits.reserve(message_length);
  for (std::size_t i = 0; i < message_length; ++i) {
    message.bits.push_back(stego[i * (key_length + 1)]);
  }
  return message;
}

DnaSequence encode_ascii(std::string_view text, std::string id) {
  BitString bits;
  bits.bits.reserve(text.size() * 8);
  for (unsigned char byte : text) {
    for (int shift = 7; shift >= 0; --shift) {
      bits.bits.push_back(static_cast<std::uint8_t>((byte >> shift) & 1));
    }
  }
  return bits_to_dna(bits, std::move(id));
}

std::string decode_ascii(const DnaSequence& seq) {
  if (seq.bases.size() % 4 != 0) {
    throw std::invalid_argument("ASCII-encoded sequence length must be a multiple of 4");
  }
  if (seq.bases.empty()) return {};
  BitString bits = dna_to_bits(seq);
  std::string text;
  text.reserve(bits.size() / 8);
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t j = 0; j < 8; ++j) byte = static_cast<unsigned char>((byte << 1) | bits[i + j]);
    text.push_back(static_cast<char>(byte));
  }
  return text;
}

std::string_view fivebit_alphabet() {
  static const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ .,-?!";
  return alphabet;
}

DnaSequence encode_fivebit(std::string_view text, std::string id) {
  const std::string_view alphabet = fivebit_alphabet();
  BitString bits;
  bits.bits.reserve(text.size() * 5 + 1);
  for (char c : text) {
    auto pos = alphabet.find(c);
    if (pos == std::string_view::npos) {
      throw std::invalid_argument("symbol '" + std::string(1, c) +
                                  "' is outside the 5-bit alphabet");
    }
    for (int shift = 4; shift >= 0; --shift) {
      bits.bits.push_back(static_cast<std::uint8_t>((pos >> shift) & 1));
    }
  }
  if (bits.size() % 2 != 0) bits.bits.push_back(0);  // pad to even
  DnaSequence seq = bits_to_dna(bits, std::move(id));
  return seq;
}

std::string decode_fivebit(const DnaSequence& seq) {
  const std::string_view alphabet = fivebit_alphabet();
  BitString bits = seq.bases.empty() ? BitString{} : dna_to_bits(seq);
  const std::size_t symbols = bits.size() / 5;
  for (std::size_t i = symbols * 5; i < bits.size(); ++i) {
    if (bits[i] != 0) throw std::invalid_argument("nonzero padding in 5-bit payload");
  }
  std::string text;
  text.reserve(symbols);
  for (std::size_t i = 0; i < symbols; ++i) {
    std::size_t value = 0;
    for (std::size_t j = 0; j < 5; ++j) value = (value << 1) | bits[i * 5 + j];
    text.push_back(alphabet[value]);
  }
  return text;
}

namespace {

struct SynonymSlot {
  std::vector<std::string> codons;  // first 2^bits of the sorted synonym set
  std::size_t bits = 0;
};

// Synonym slot for one codon: sorted synonyms of its amino acid truncated
// to the largest power of two.
SynonymSlot synonym_slot(const std::string& codon, const CodonTable& table) {
  auto it = table.find(codon);
  if (it == table.end()) {
    throw std::invalid_argument("codon '" + codon + "' missing from codon table");
  }
  const char amino = it->second;
  std::vector<std::string> synonyms;
  for (const auto& [c, a] : table) {
    if (a == amino) synonyms.push_back(c);
  }
  std::sort(synonyms.begin(), synonyms.end());
  SynonymSlot slot;
  std::size_t capacity = 1;
  while (capacity * 2 <= synonyms.size()) {
    capacity *= 2;
    ++slot.bits;
  }
  synonyms.resize(capacity);
  slot.codons = std::move(synonyms);
  return slot;
}

void check_codon_cover(const DnaSequence& cover, const CodonTable& table) {
  validate_sequence(cover);
  if (cover.bases.size() % 3 != 0) {
    throw std::invalid_argument("cover length must be divisible by 3");
  }
  if (table.size() != 64) {
    throw std::invalid_argument("codon table must cover all 64 codons");
  }
}

}  // namespace

std::size_t codon_capacity_bits(const DnaSequence& cover, const CodonTable& table) {
  check_codon_cover(cover, table);
  std::size_t capacity = 0;
  for (std::size_t i = 0; i + 3 <= cover.bases.size(); i += 3) {
    capacity += synonym_slot(cover.bases.substr(i, 3), table).bits;
  }
  return capacity;
}

EmbedResult embed_codon(const DnaSequence& cover, const BitString& message,
                        const CodonTable& table) {
  check_codon_cover(cover, table);
  EmbedResult result;
  result.stego_sequence = cover;
  result.capacity_used_bits = message.size();

  std::size_t next_bit = 0;
  for (std::size_t i = 0; i + 3 <= cover.bases.size() && next_bit < message.size(); i += 3) {
    SynonymSlot slot = synonym_slot(cover.bases.substr(i, 3), table);
    if (slot.bits == 0) continue;
    std::size_t take = std::min(slot.bits, message.size() - next_bit);
    std::size_t index = 0;
    for (std::size_t j = 0; j < slot.bits; ++j) {
      int bit = j < take ? message[next_bit + j] : 0;  // zero-fill a short tail
      index = (index << 1) | static_cast<std::size_t>(bit);
    }
    next_bit += take;
    const std::string& replacement = slot.codons[index];
    for (std::size_t j = 0; j < 3; ++j) {
      if (result.stego_sequence.bases[i + j] != replacement[j]) {
        result.stego_sequence.bases[i + j] = replacement[j];
        result.modified_positions.push_back(i + j);
      }
    }
  }
  if (next_bit < message.size()) {
    throw std::invalid_argument("message of " + std::to_string(message.size()) +
                                " bits exceeds codon capacity of " +
                                std::to_string(codon_capacity_bits(cover, table)) + " bits");
  }
  return result;
}

BitString extract_codon(const DnaSequence& stego, std::size_t message_length,
                        const CodonTable& table) {
  check_codon_cover(stego, table);
  BitString message;
  message.bits.reserve(message_length);
  for (std::size_t i = 0; i + 3 <= stego.bases.size() && message.size() < message_length;
       i += 3) {
    const std::string codon = stego.bases.substr(i, 3);
    SynonymSlot slot = synonym_slot(codon, table);
    if (slot.bits == 0) continue;
    auto it = std::find(slot.codons.begin(), slot.codons.end(), codon);
    if (it == slot.codons.end()) {
      throw std::invalid_argument("codon '" + codon + "' is outside its embeddable set");
    }
    std::size_t index = static_cast<std::size_t>(it - slot.codons.begin());
    for (std::size_t j = 0; j < slot.bits && message.size() < message_length; ++j) {
      message.bits.push_back(
          static_cast<std::uint8_t>((index >> (slot.bits - 1 - j)) & 1));
    }
  }
  if (message.size() < message_length) {
    throw std::invalid_argument("stego sequence too short for claimed message length");
  }
  return message;
}

std::string translate(const DnaSequence& seq, const CodonTable& table) {
  check_codon_cover(seq, table);
  std::string aminos;
  aminos.reserve(seq.bases.size() / 3);
  for (std::size_t i = 0; i + 3 <= seq.bases.size(); i += 3) {
    aminos.push_back(table.at(seq.bases.substr(i, 3)));
  }
  return aminos;
}

EmbedResult perturb(const DnaSequence& seq, double rate, std::uint64_t seed) {
  validate_sequence(seq);
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in [0, 1]");
  const std::size_t length = seq.bases.size();
  const std::size_t count =
      static_cast<std::size_t>(std::ceil(rate * static_cast<double>(length)));

  EmbedResult result;
  result.stego_sequence = seq;
  result.capacity_used_bits = 0;
  if (count == 0) return result;

  auto g = substream(seed, "perturb/" + seq.id);
  // Partial Fisher-Yates over position indices.
  std::vector<std::size_t> positions(length);
  for (std::size_t i = 0; i < length; ++i) positions[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(uniform_index(g, length - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(count);
  std::sort(positions.begin(), positions.end());

  for (std::size_t pos : positions) {
    int original = base_index(seq.bases[pos]);
    int offset = 1 + static_cast<int>(uniform_index(g, 3));
    result.stego_sequence.bases[pos] = index_base((original + offset) % 4);
    result.modified_positions.push_back(pos);
  }
  return result;
}

}  // namespace stegodna

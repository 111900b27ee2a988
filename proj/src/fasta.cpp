#include "stegodna/fasta.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stegodna {

namespace {

struct RawRecord {
  std::string header;  // full header line without '>'
  std::string bases;
};

std::vector<RawRecord> read_records(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  bool in_record = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      records.push_back(RawRecord{line.substr(1), {}});
      in_record = true;
    } else {
      if (!in_record) {
        throw std::invalid_argument("malformed FASTA: sequence data before any '>' header");
      }
      records.back().bases += line;
    }
  }
  return records;
}

std::string header_id(const std::string& header) {
  auto ws = header.find_first_of(" \t");
  return ws == std::string::npos ? header : header.substr(0, ws);
}

DnaSequence finish_record(const RawRecord& raw, NonAcgtPolicy policy) {
  DnaSequence seq;
  seq.id = header_id(raw.header);
  seq.bases.reserve(raw.bases.size());
  for (char c : raw.bases) {
    char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (is_valid_base(u)) {
      seq.bases.push_back(u);
    } else if (policy == NonAcgtPolicy::reject) {
      throw std::invalid_argument("record '" + seq.id + "' contains disallowed character '" +
                                  std::string(1, c) + "'");
    }
  }
  if (seq.bases.empty()) {
    throw std::invalid_argument("record '" + seq.id + "' is empty");
  }
  return seq;
}

}  // namespace

std::vector<DnaSequence> parse_fasta(std::istream& in, NonAcgtPolicy policy) {
  std::vector<DnaSequence> out;
  for (const auto& raw : read_records(in)) {
    out.push_back(finish_record(raw, policy));
  }
  return out;
}

std::vector<DnaSequence> parse_fasta_file(const std::string& path, NonAcgtPolicy policy) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FASTA file: " + path);
  return parse_fasta(in, policy);
}

void write_fasta(std::ostream& out, const std::vector<DnaSequence>& seqs,
                 std::size_t line_width) {
  for (const auto& seq : seqs) {
    out << '>' << seq.id;
    if (seq.label != Label::unknown) out << " label=" << to_string(seq.label);
    out << '\n';
    for (std::size_t i = 0; i < seq.bases.size(); i += line_width) {
      out << seq.bases.substr(i, line_width) << '\n';
    }
  }
}

void write_fasta_file(const std::string& path, const std::vector<DnaSequence>& seqs,
                      std::size_t line_width) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write FASTA file: " + path);
  write_fasta(out, seqs, line_width);
}

std::vector<DnaSequence> read_labeled_fasta(std::istream& in, NonAcgtPolicy policy) {
  std::vector<DnaSequence> out;
  for (const auto& raw : read_records(in)) {
    DnaSequence seq = finish_record(raw, policy);
    auto pos = raw.header.find("label=");
    if (pos != std::string::npos) {
      std::string value = raw.header.substr(pos + 6);
      auto ws = value.find_first_of(" \t");
      if (ws != std::string::npos) value.resize(ws);
      seq.label = label_from_string(value);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<DnaSequence> read_labeled_fasta_file(const std::string& path,
                                                 NonAcgtPolicy policy) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FASTA file: " + path);
  return read_labeled_fasta(in, policy);
}

}  // namespace stegodna

#include "stegodna/labeling.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace stegodna {

namespace {

void check_intervals(const DnaSequence& seq, const std::vector<Interval>& intervals) {
  std::size_t prev_end = 0;
  bool first = true;
  for (const auto& iv : intervals) {
    if (iv.begin >= iv.end) {
      throw std::invalid_argument("interval with begin >= end on '" + seq.id + "'");
    }
    if (iv.end > seq.bases.size()) {
      throw std::invalid_argument("interval out of bounds on '" + seq.id + "'");
    }
    if (!first && iv.begin < prev_end) {
      throw std::invalid_argument("overlapping or unsorted intervals on '" + seq.id + "'");
    }
    prev_end = iv.end;
    first = false;
  }
}

}  // namespace

std::vector<DnaSequence> label_by_intervals(const DnaSequence& seq,
                                            const std::vector<Interval>& exon_intervals,
                                            std::size_t window) {
  if (window == 0 || window > seq.bases.size()) {
    throw std::invalid_argument("window must be in [1, sequence length]");
  }
  check_intervals(seq, exon_intervals);

  std::vector<DnaSequence> out;
  for (std::size_t start = 0; start + window <= seq.bases.size(); start += window) {
    const std::size_t end = start + window;
    bool inside_exon = false;
    bool straddles = false;
    for (const auto& iv : exon_intervals) {
      if (iv.end <= start || iv.begin >= end) continue;  // no overlap
      if (iv.begin <= start && iv.end >= end) {
        inside_exon = true;
      } else {
        straddles = true;
      }
    }
    if (straddles) continue;
    out.push_back(DnaSequence{seq.id + "__w" + std::to_string(start),
                              seq.bases.substr(start, window),
                              inside_exon ? Label::exon : Label::intron});
  }
  return out;
}

std::map<std::string, std::vector<Interval>> read_interval_csv(std::istream& in) {
  std::map<std::string, std::vector<Interval>> out;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("interval CSV is empty");
  }
  // header row: seq_id,start,end
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string id, start, end;
    if (!std::getline(row, id, ',') || !std::getline(row, start, ',') ||
        !std::getline(row, end, ',')) {
      throw std::invalid_argument("interval CSV line " + std::to_string(line_no) +
                                  " is malformed");
    }
    out[id].push_back(Interval{std::stoull(start), std::stoull(end)});
  }
  return out;
}

std::map<std::string, std::vector<Interval>> read_interval_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interval CSV: " + path);
  return read_interval_csv(in);
}

}  // namespace stegodna

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stegodna/dna.hpp"

namespace stegodna {

// Half-open [begin, end) over sequence positions.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Tiles `seq` into non-overlapping windows of length `window`. A window
// entirely inside an exon interval is labeled exon, one entirely outside
// all intervals is labeled intron, and straddling windows are discarded.
// Intervals must be sorted, non-overlapping, and within bounds.
std::vector<DnaSequence> label_by_intervals(const DnaSequence& seq,
                                            const std::vector<Interval>& exon_intervals,
                                            std::size_t window);

// Headered CSV `seq_id,start,end`, one exon interval per row.
std::map<std::string, std::vector<Interval>> read_interval_csv(std::istream& in);
std::map<std::string, std::vector<Interval>> read_interval_csv_file(const std::string& path);

}  // namespace stegodna

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stegodna/dna.hpp"
#include "stegodna/model.hpp"

namespace stegodna {

enum class LabelContext { intron, exon, mixed };

const char* to_string(LabelContext ctx);
LabelContext label_context_from_string(std::string_view s);

// Clean-score mean and population standard deviation; the decision band.
struct Calibration {
  double mean_score = 0.0;
  double epsilon = 0.0;
  std::size_t sample_count = 0;
  LabelContext label_context = LabelContext::mixed;
};

struct Detection {
  std::string sequence_id;
  double score = 0.0;
  double deviation = 0.0;
  bool flagged = false;
};

using SequenceScorer = std::function<double(const DnaSequence&)>;

Calibration calibrate_scores(const std::vector<double>& scores, LabelContext context);

// Scores clean sequences with the model; when context is intron or exon
// only sequences carrying that label participate.
Calibration calibrate(const SteganalysisModel& model,
                      const std::vector<DnaSequence>& clean,
                      LabelContext context = LabelContext::mixed);
Calibration calibrate_with(const SequenceScorer& scorer,
                           const std::vector<DnaSequence>& clean,
                           LabelContext context = LabelContext::mixed);

// Flagged iff |mean - score| > epsilon, strictly.
Detection detect(const Calibration& cal, double score, std::string sequence_id = "");

std::vector<Detection> scan(const SteganalysisModel& model, const Calibration& cal,
                            const std::vector<DnaSequence>& suspects);
std::vector<Detection> scan_with(const SequenceScorer& scorer, const Calibration& cal,
                                 const std::vector<DnaSequence>& suspects);

void write_detections_csv(std::ostream& out, const std::vector<Detection>& detections);

}  // namespace stegodna

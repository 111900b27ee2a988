#include "stegodna/detector.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace stegodna {

const char* to_string(LabelContext ctx) {
  switch (ctx) {
    case LabelContext::intron: return "intron";
    case LabelContext::exon: return "exon";
    default: return "mixed";
  }
}

LabelContext label_context_from_string(std::string_view s) {
  if (s == "intron") return LabelContext::intron;
  if (s == "exon") return LabelContext::exon;
  if (s == "mixed" || s == "both") return LabelContext::mixed;
  throw std::invalid_argument("unknown label context: " + std::string(s));
}

Calibration calibrate_scores(const std::vector<double>& scores, LabelContext context) {
  if (scores.size() < 2) {
    throw std::invalid_argument("calibration requires at least 2 clean sequences");
  }
  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= n;  // population standard deviation
  return Calibration{mean, std::sqrt(var), scores.size(), context};
}

namespace {

std::vector<double> context_scores(const SequenceScorer& scorer,
                                   const std::vector<DnaSequence>& clean,
                                   LabelContext context) {
  std::vector<double> scores;
  for (const auto& seq : clean) {
    if (context == LabelContext::intron && seq.label != Label::intron) continue;
    if (context == LabelContext::exon && seq.label != Label::exon) continue;
    scores.push_back(scorer(seq));
  }
  return scores;
}

}  // namespace

Calibration calibrate_with(const SequenceScorer& scorer,
                           const std::vector<DnaSequence>& clean, LabelContext context) {
  return calibrate_scores(context_scores(scorer, clean, context), context);
}

Calibration calibrate(const SteganalysisModel& model,
                      const std::vector<DnaSequence>& clean, LabelContext context) {
  return calibrate_with([&](const DnaSequence& s) { return predict_score(model, s); },
                        clean, context);
}

Detection detect(const Calibration& cal, double score, std::string sequence_id) {
  Detection d;
  d.sequence_id = std::move(sequence_id);
  d.score = score;
  d.deviation = std::abs(cal.mean_score - score);
  d.flagged = d.deviation > cal.epsilon;
  return d;
}

std::vector<Detection> scan_with(const SequenceScorer& scorer, const Calibration& cal,
                                 const std::vector<DnaSequence>& suspects) {
  std::vector<Detection> out;
  out.reserve(suspects.size());
  for (const auto& seq : suspects) {
    out.push_back(detect(cal, scorer(seq), seq.id));
  }
  return out;
}

std::vector<Detection> scan(const SteganalysisModel& model, const Calibration& cal,
                            const std::vector<DnaSequence>& suspects) {
  return scan_with([&](const DnaSequence& s) { return predict_score(model, s); }, cal,
                   suspects);
}

void write_detections_csv(std::ostream& out, const std::vector<Detection>& detections) {
  out << "seq_id,score,deviation,flagged\n";
  char buf[64];
  for (const auto& d : detections) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", d.score, d.deviation);
    out << d.sequence_id << ',' << buf << ',' << (d.flagged ? "true" : "false") << '\n';
  }
}

}  // namespace stegodna

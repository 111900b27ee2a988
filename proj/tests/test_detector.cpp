#include <doctest.h>

#include <cmath>

#include "stegodna/detector.hpp"
#include "stegodna/infotheory.hpp"
#include "stegodna/rng.hpp"

using namespace stegodna;

TEST_CASE("calibrate_scores hand-evaluated population std") {
  Calibration cal = calibrate_scores({0.8, 0.9, 1.0}, LabelContext::mixed);
  CHECK(cal.mean_score == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(cal.epsilon == doctest::Approx(std::sqrt(0.02 / 3.0)).epsilon(1e-12));
  CHECK(cal.epsilon == doctest::Approx(0.08165).epsilon(1e-4));
  CHECK(cal.sample_count == 3);
}

TEST_CASE("calibrate_scores identical scores give zero epsilon") {
  Calibration cal = calibrate_scores({0.42, 0.42, 0.42, 0.42}, LabelContext::intron);
  CHECK(cal.mean_score == doctest::Approx(0.42));
  CHECK(cal.epsilon == 0.0);
}

TEST_CASE("calibrate requires at least two sequences") {
  CHECK_THROWS_AS(calibrate_scores({0.5}, LabelContext::mixed), std::invalid_argument);
}

TEST_CASE("detect applies the strict deviation rule") {
  Calibration cal{0.9, 0.05, 10, LabelContext::mixed};
  CHECK_FALSE(detect(cal, 0.9).flagged);
  CHECK(detect(cal, 0.7).flagged);
  CHECK(detect(cal, 0.7).deviation == doctest::Approx(0.2));
  // Boundary |mean - score| == epsilon is NOT flagged (binary-exact values).
  Calibration exact{0.75, 0.25, 10, LabelContext::mixed};
  CHECK_FALSE(detect(exact, 0.5).flagged);
  CHECK_FALSE(detect(exact, 1.0).flagged);
  CHECK(detect(exact, 0.499).flagged);
}

TEST_CASE("detect monotone flagging over random triples") {
  auto rng = substream(40, "detect-monotone");
  for (int trial = 0; trial < 10000; ++trial) {
    Calibration cal{uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 0.5), 5,
                    LabelContext::mixed};
    const double y1 = uniform_real(rng, -0.5, 1.5);
    const double y2 = uniform_real(rng, -0.5, 1.5);
    const bool f1 = detect(cal, y1).flagged;
    const bool f2 = detect(cal, y2).flagged;
    if (std::abs(cal.mean_score - y1) <= std::abs(cal.mean_score - y2) && f1) {
      CHECK(f2);
    }
  }
}

TEST_CASE("scan preserves order and handles empty input") {
  Calibration cal{0.5, 0.1, 4, LabelContext::mixed};
  auto scorer = [](const DnaSequence& s) { return s.bases.size() > 2 ? 0.9 : 0.5; };
  std::vector<DnaSequence> suspects = {{"a", "ACGT", Label::unknown},
                                       {"b", "AC", Label::unknown}};
  auto detections = scan_with(scorer, cal, suspects);
  REQUIRE(detections.size() == 2);
  CHECK(detections[0].sequence_id == "a");
  CHECK(detections[0].flagged);
  CHECK_FALSE(detections[1].flagged);
  CHECK(scan_with(scorer, cal, {}).empty());
}

TEST_CASE("calibration-set scan flags strictly less than everything when epsilon > 0") {
  auto rng = substream(41, "self-scan");
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DnaSequence> seqs;
    std::vector<double> scores;
    for (int i = 0; i < 12; ++i) {
      seqs.push_back({"s" + std::to_string(i), "ACGT", Label::unknown});
      scores.push_back(uniform_real(rng, 0.0, 1.0));
    }
    auto scorer = [&](const DnaSequence& s) {
      return scores[static_cast<std::size_t>(std::stoi(s.id.substr(1)))];
    };
    Calibration cal = calibrate_with(scorer, seqs, LabelContext::mixed);
    if (cal.epsilon == 0.0) continue;
    auto detections = scan_with(scorer, cal, seqs);
    std::size_t flagged = 0;
    for (const auto& d : detections) flagged += d.flagged ? 1 : 0;
    CHECK(flagged < seqs.size());
  }
}

TEST_CASE("kmer_distribution basics") {
  auto d1 = kmer_distribution({{"a", "AAAA", Label::unknown}}, 1);
  REQUIRE(d1.support == std::vector<std::string>{"A"});
  CHECK(d1.probabilities[0] == 1.0);

  auto d2 = kmer_distribution({{"a", "ACGT", Label::unknown}}, 2);
  REQUIRE(d2.support.size() == 3);
  for (double p : d2.probabilities) CHECK(p == doctest::Approx(1.0 / 3.0));

  auto d3 = kmer_distribution(
      {{"a", "AAAA", Label::unknown}, {"b", "CCCC", Label::unknown}}, 1);
  REQUIRE(d3.support.size() == 2);
  CHECK(d3.probabilities[0] == doctest::Approx(0.5));
  CHECK(d3.probabilities[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(kmer_distribution({{"a", "AC", Label::unknown}}, 3),
                  std::invalid_argument);
}

TEST_CASE("entropy reference values") {
  EmpiricalDistribution uniform4{{"A", "C", "G", "T"}, {0.25, 0.25, 0.25, 0.25}};
  CHECK(entropy_bits(uniform4) == 2.0);

  EmpiricalDistribution point{{"AA"}, {1.0}};
  CHECK(entropy_bits(point) == 0.0);

  EmpiricalDistribution skew{{"A", "C", "G"}, {0.5, 0.25, 0.25}};
  CHECK(entropy_bits(skew) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("entropy is maximized by the uniform distribution") {
  auto rng = substream(42, "entropy-max");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 14);
    std::vector<double> probs(n);
    double total = 0.0;
    for (double& p : probs) {
      p = uniform_real(rng, 1e-6, 1.0);
      total += p;
    }
    EmpiricalDistribution dist;
    for (std::size_t i = 0; i < n; ++i) {
      dist.support.push_back("k" + std::to_string(i));
      dist.probabilities.push_back(probs[i] / total);
    }
    CHECK(entropy_bits(dist) <= std::log2(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("mutual information of an independent joint is zero") {
  // p(x,y) = p(x) p(y) over a 2x3 support.
  const std::vector<double> px = {0.3, 0.7};
  const std::vector<double> py = {0.2, 0.5, 0.3};
  EmpiricalDistribution joint;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      joint.support.push_back("x" + std::to_string(i) + "|y" + std::to_string(j));
      joint.probabilities.push_back(px[i] * py[j]);
    }
  }
  CHECK(std::abs(mutual_information_bits(joint)) <= 1e-12);
}

TEST_CASE("mutual information of a perfectly correlated binary pair is 1 bit") {
  EmpiricalDistribution joint{{"0|0", "1|1"}, {0.5, 0.5}};
  CHECK(mutual_information_bits(joint) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information matches the brute-force double sum and is symmetric") {
  auto rng = substream(43, "mi-oracle");
  for (int trial = 0; trial < 30; ++trial) {
    EmpiricalDistribution joint;
    double total = 0.0;
    std::vector<std::vector<double>> p(3, std::vector<double>(3));
    for (auto& row : p) {
      for (double& v : row) {
        v = uniform_real(rng, 0.01, 1.0);
        total += v;
      }
    }
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        p[i][j] /= total;
        joint.support.push_back("a" + std::to_string(i) + "|b" + std::to_string(j));
        joint.probabilities.push_back(p[i][j]);
      }
    }
    // Direct I = sum p(x,y) log2( p(x,y) / (p(x)p(y)) ).
    std::vector<double> px(3, 0.0), py(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        px[i] += p[i][j];
        py[j] += p[i][j];
      }
    }
    double direct = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        direct += p[i][j] * std::log2(p[i][j] / (px[i] * py[j]));
      }
    }
    const double via_entropies = mutual_information_bits(joint);
    CHECK(via_entropies == doctest::Approx(direct).epsilon(1e-10));
    CHECK(via_entropies >= -1e-12);
    const double transposed = mutual_information_bits(transpose_joint(joint));
    CHECK(std::abs(via_entropies - transposed) <= 1e-12);
  }
}

TEST_CASE("security_report on identical corpora") {
  Corpus clean;
  clean.sequences = {{"a", "ACGTACGTAA", Label::intron},
                     {"b", "TTGGCCAATT", Label::exon}};
  auto report = security_report(clean, clean, 3);
  CHECK(report.delta_h == 0.0);
  CHECK(report.mi > 0.0);  // identical sequences are perfectly dependent
  CHECK(report.verdict.find("indistinguishable") != std::string::npos);
}

TEST_CASE("security_report separates low-entropy clean from random stego") {
  Corpus clean, stego;
  auto rng = substream(44, "secrep");
  for (int i = 0; i < 10; ++i) {
    clean.sequences.push_back(
        {"s" + std::to_string(i), std::string(200, 'A'), Label::intron});
    DnaSequence r;
    r.id = "s" + std::to_string(i);
    for (int b = 0; b < 200; ++b) {
      r.bases.push_back(index_base(static_cast<int>(uniform_index(rng, 4))));
    }
    stego.sequences.push_back(r);
  }
  auto report = security_report(clean, stego, 3);
  CHECK(report.delta_h > 0.1);
  CHECK(report.verdict.find("not secure") != std::string::npos);

  CHECK_THROWS_AS(security_report(clean, Corpus{}, 3), std::invalid_argument);
}

TEST_CASE("security report json shape") {
  Corpus clean;
  clean.sequences = {{"a", "ACGTACGT", Label::intron}, {"b", "ACGTTGCA", Label::exon}};
  auto j = to_json(security_report(clean, clean, 2));
  CHECK(j.contains("k"));
  CHECK(j.contains("h_clean"));
  CHECK(j.contains("h_stego"));
  CHECK(j.contains("delta_h"));
  CHECK(j.contains("mi"));
  CHECK(j.contains("verdict"));
}

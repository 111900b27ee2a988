#include <doctest.h>

#include <sstream>

#include "stegodna/fasta.hpp"
#include "stegodna/labeling.hpp"
#include "stegodna/rng.hpp"
#include "stegodna/synthetic.hpp"

using namespace stegodna;

TEST_CASE("parse_fasta single record") {
  std::istringstream in(">s1\nACGT\n");
  auto seqs = parse_fasta(in);
  REQUIRE(seqs.size() == 1);
  CHECK(seqs[0].id == "s1");
  CHECK(seqs[0].bases == "ACGT");
  CHECK(seqs[0].label == Label::unknown);
}

TEST_CASE("parse_fasta concatenates lines and splits records") {
  std::istringstream in(">a\nAC\nGT\n>b\nTTTT\n");
  auto seqs = parse_fasta(in);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].bases == "ACGT");
  CHECK(seqs[1].id == "b");
  CHECK(seqs[1].bases == "TTTT");
}

TEST_CASE("parse_fasta id stops at whitespace, lowercase uppercased") {
  std::istringstream in(">chr1 some description\nacgt\n");
  auto seqs = parse_fasta(in);
  REQUIRE(seqs.size() == 1);
  CHECK(seqs[0].id == "chr1");
  CHECK(seqs[0].bases == "ACGT");
}

TEST_CASE("parse_fasta rejects non-ACGT under default policy, names the record") {
  std::istringstream in(">x\nACGN\n");
  CHECK_THROWS_WITH_AS(parse_fasta(in), doctest::Contains("x"), std::invalid_argument);
}

TEST_CASE("parse_fasta drop policy removes offending characters") {
  std::istringstream in(">x\nACGN\n");
  auto seqs = parse_fasta(in, NonAcgtPolicy::drop);
  REQUIRE(seqs.size() == 1);
  CHECK(seqs[0].bases == "ACG");
}

TEST_CASE("parse_fasta errors on data before header and empty records") {
  std::istringstream no_header("ACGT\n");
  CHECK_THROWS_AS(parse_fasta(no_header), std::invalid_argument);
  std::istringstream empty_record(">only_header\n>second\nAC\n");
  CHECK_THROWS_AS(parse_fasta(empty_record), std::invalid_argument);
}

TEST_CASE("fasta round trip over random corpora") {
  auto rng = substream(7, "fasta-roundtrip");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DnaSequence> seqs;
    const std::size_t n = 1 + uniform_index(rng, 5);
    for (std::size_t i = 0; i < n; ++i) {
      DnaSequence s;
      s.id = "seq" + std::to_string(trial) + "_" + std::to_string(i);
      const std::size_t len = 1 + uniform_index(rng, 200);
      for (std::size_t b = 0; b < len; ++b) {
        s.bases.push_back(index_base(static_cast<int>(uniform_index(rng, 4))));
      }
      s.label = i % 2 ? Label::intron : Label::exon;
      seqs.push_back(s);
    }
    std::ostringstream out;
    write_fasta(out, seqs);
    std::istringstream in(out.str());
    auto parsed = read_labeled_fasta(in);
    REQUIRE(parsed.size() == seqs.size());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(parsed[i].id == seqs[i].id);
      CHECK(parsed[i].bases == seqs[i].bases);
      CHECK(parsed[i].label == seqs[i].label);
    }
  }
}

TEST_CASE("label_by_intervals exact tiling") {
  DnaSequence seq{"s", "ACGTACGTACGT", Label::unknown};
  auto windows = label_by_intervals(seq, {{0, 6}}, 6);
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].label == Label::exon);
  CHECK(windows[1].label == Label::intron);
  CHECK(windows[0].bases == "ACGTAC");
}

TEST_CASE("label_by_intervals discards straddling windows") {
  DnaSequence seq{"s", "ACGTACGTACGT", Label::unknown};
  auto windows = label_by_intervals(seq, {{2, 8}}, 6);
  CHECK(windows.empty());
}

TEST_CASE("label_by_intervals longer tiling") {
  DnaSequence seq{"s", std::string(24, 'A'), Label::unknown};
  auto windows = label_by_intervals(seq, {{0, 12}}, 6);
  REQUIRE(windows.size() == 4);
  std::size_t exons = 0, introns = 0;
  for (const auto& w : windows) {
    (w.label == Label::exon ? exons : introns) += 1;
  }
  CHECK(exons == 2);
  CHECK(introns == 2);
}

TEST_CASE("label_by_intervals rejects bad intervals") {
  DnaSequence seq{"s", std::string(12, 'A'), Label::unknown};
  CHECK_THROWS_AS(label_by_intervals(seq, {{0, 20}}, 6), std::invalid_argument);
  CHECK_THROWS_AS(label_by_intervals(seq, {{0, 6}, {4, 10}}, 6), std::invalid_argument);
}

TEST_CASE("interval csv parsing") {
  std::istringstream in("seq_id,start,end\nchr1,0,6\nchr1,10,12\nchr2,3,5\n");
  auto intervals = read_interval_csv(in);
  REQUIRE(intervals.size() == 2);
  REQUIRE(intervals["chr1"].size() == 2);
  CHECK(intervals["chr1"][1].begin == 10);
  CHECK(intervals["chr2"][0].end == 5);
}

TEST_CASE("generate_synthetic degenerate chain is constant") {
  SyntheticSpec spec;
  spec.markov_order = 1;
  spec.intron_transitions = {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
  spec.exon_transitions = {{0, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}};
  spec.seq_length = 20;
  spec.count_per_class = 3;
  spec.seed = 11;
  auto corpus = generate_synthetic(spec);
  REQUIRE(corpus.sequences.size() == 6);
  for (const auto& s : corpus.sequences) {
    // First base seeds the context uniformly; everything after is forced.
    for (std::size_t i = 1; i < s.bases.size(); ++i) {
      CHECK(s.bases[i] == (s.label == Label::intron ? 'A' : 'T'));
    }
  }
}

TEST_CASE("generate_synthetic deterministic per seed") {
  auto spec = default_synthetic_spec(42, 80, 5);
  auto a = generate_synthetic(spec);
  auto b = generate_synthetic(spec);
  REQUIRE(a.sequences.size() == b.sequences.size());
  for (std::size_t i = 0; i < a.sequences.size(); ++i) {
    CHECK(a.sequences[i] == b.sequences[i]);
  }
}

TEST_CASE("order-1 forced alternation") {
  SyntheticSpec spec;
  spec.markov_order = 1;
  // A -> G -> A -> G ... ; start uniform but transitions are deterministic.
  spec.intron_transitions = {{0, 0, 1, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
  spec.exon_transitions = {{0, 1, 0, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}, {0, 1, 0, 0}};
  spec.seq_length = 12;
  spec.count_per_class = 4;
  spec.seed = 3;
  auto corpus = generate_synthetic(spec);
  for (const auto& s : corpus.sequences) {
    if (s.label != Label::intron) continue;
    for (std::size_t i = 1; i < s.bases.size(); ++i) {
      if (s.bases[i - 1] == 'A') CHECK(s.bases[i] == 'G');
      if (s.bases[i - 1] == 'G') CHECK(s.bases[i] == 'A');
    }
  }
}

TEST_CASE("generate_synthetic empirical transition frequencies converge") {
  auto spec = default_synthetic_spec(123, 10000, 1);
  auto corpus = generate_synthetic(spec);
  for (const auto& seq : corpus.sequences) {
    const auto& rows = seq.label == Label::intron ? spec.intron_transitions
                                                  : spec.exon_transitions;
    double counts[4][4] = {};
    double totals[4] = {};
    for (std::size_t i = 1; i < seq.bases.size(); ++i) {
      const int from = base_index(seq.bases[i - 1]);
      const int to = base_index(seq.bases[i]);
      counts[from][to] += 1.0;
      totals[from] += 1.0;
    }
    for (int r = 0; r < 4; ++r) {
      REQUIRE(totals[r] > 0);
      for (int c = 0; c < 4; ++c) {
        CHECK(std::abs(counts[r][c] / totals[r] - rows[r][c]) < 0.05);
      }
    }
  }
}

TEST_CASE("synthetic spec validation") {
  auto spec = default_synthetic_spec(1, 10, 1);
  spec.intron_transitions[0][0] = 0.9;  // row no longer sums to 1
  CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);

  auto close = default_synthetic_spec(1, 10, 1);
  close.exon_transitions = close.intron_transitions;  // TV distance 0
  CHECK_THROWS_AS(validate(close), std::invalid_argument);
}

TEST_CASE("synthetic spec json round trip") {
  auto spec = default_synthetic_spec(99, 64, 7);
  auto j = to_json(spec);
  auto back = synthetic_spec_from_json(j);
  CHECK(back.markov_order == spec.markov_order);
  CHECK(back.seq_length == spec.seq_length);
  CHECK(back.count_per_class == spec.count_per_class);
  CHECK(back.seed == spec.seed);
  CHECK(back.intron_transitions == spec.intron_transitions);
  CHECK(back.exon_transitions == spec.exon_transitions);
}

TEST_CASE("corpus label counting and windows") {
  Corpus corpus;
  corpus.sequences = {{"a", "ACGTAC", Label::intron}, {"b", "GGGTTT", Label::exon}};
  CHECK(corpus.count(Label::intron) == 1);
  CHECK(corpus.has_both_labels());
  auto tiles = chop_windows(corpus.sequences[0], 3);
  REQUIRE(tiles.size() == 2);
  CHECK(tiles[0].bases == "ACG");
  CHECK(tiles[1].bases == "TAC");
  CHECK(tiles[1].label == Label::intron);
}

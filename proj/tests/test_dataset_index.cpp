#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "nmtdebug/dataset_index.hpp"
#include "nmtdebug/errors.hpp"
#include "nmtdebug/metrics.hpp"

using namespace nmtdebug;

namespace {

ScoredDataset with_confidences(const std::vector<double> &values) {
  ScoredDataset s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    s.dataset.records.push_back(make_record(std::to_string(k), {"a"}, {"b"}, AttentionMatrix(1, 1, 1.0)));
    ScoreSet sc;
    sc.confidence = values[k];
    s.scores.push_back(sc);
  }
  return s;
}

ScoreSet attention_scores(double percent) {
  ScoreSet s;
  s.cdp = std::log(percent / 100.0);
  s.confidence = s.cdp;
  return s;
}

}  // namespace

TEST_CASE("score_dataset") {
  gen::Rng rng(41);
  const auto d = gen::dataset(rng, 1);
  const auto scored = score_dataset(d);
  REQUIRE(scored.size() == 1);
  CHECK(scored.scores[0] == score_record(d.records[0]));

  SUBCASE("parallel scoring matches sequential") {
    const auto big = gen::dataset(rng, 700);
    CHECK(score_dataset(big, {}, 4) == score_dataset(big, {}, 1));
  }
  SUBCASE("reference-less data has no bleu and refuses a bleu sort") {
    Dataset plain{"s", {make_record("x", {"a"}, {"b"}, AttentionMatrix(1, 1, 1.0))}};
    const auto s = score_dataset(plain);
    CHECK_FALSE(s.scores[0].bleu.has_value());
    CHECK_FALSE(s.has_references());
    CHECK_THROWS_AS(sort_indices(s, {SortField::Bleu, SortDirection::Ascending}), SortKeyError);
  }
}

TEST_CASE("property: scoring commutes with permutation") {
  gen::Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = gen::dataset(rng, gen::uniform(rng, 2, 15));
    const auto scored = score_dataset(d);
    std::vector<std::size_t> perm(d.records.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Dataset shuffled{d.system_name, {}};
    for (auto p : perm) shuffled.records.push_back(d.records[p]);
    const auto rescored = score_dataset(shuffled);
    for (std::size_t k = 0; k < perm.size(); ++k) CHECK(rescored.scores[k] == scored.scores[perm[k]]);
  }
}

TEST_CASE("sort_indices") {
  const auto s = with_confidences({-0.5, -0.1, -0.9});
  CHECK(sort_indices(s, {SortField::Confidence, SortDirection::Ascending}) == std::vector<std::size_t>{2, 0, 1});
  CHECK(sort_indices(s, {SortField::Confidence, SortDirection::Descending}) == std::vector<std::size_t>{1, 0, 2});

  const auto ties = with_confidences({-1, -1, -2, -1});
  CHECK(sort_indices(ties, {SortField::Confidence, SortDirection::Ascending}) ==
        std::vector<std::size_t>{2, 0, 1, 3});
  CHECK(sort_indices(ties, {SortField::Confidence, SortDirection::Descending}) ==
        std::vector<std::size_t>{0, 1, 3, 2});
}

TEST_CASE("property: sort_indices is a permutation; distinct values reverse exactly") {
  gen::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto scored = score_dataset(gen::dataset(rng, gen::uniform(rng, 1, 40)));
    for (auto field : {SortField::Confidence, SortField::Cdp, SortField::ApIn, SortField::ApOut, SortField::Overlap}) {
      auto asc = sort_indices(scored, {field, SortDirection::Ascending});
      auto desc = sort_indices(scored, {field, SortDirection::Descending});
      auto sorted = asc;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::size_t> identity(scored.size());
      std::iota(identity.begin(), identity.end(), 0);
      CHECK(sorted == identity);
    }
    std::vector<double> distinct(gen::uniform(rng, 1, 40));
    for (std::size_t k = 0; k < distinct.size(); ++k) distinct[k] = -static_cast<double>(k) * 0.37 + gen::unit(rng) * 0.01;
    std::shuffle(distinct.begin(), distinct.end(), rng);
    const auto fixture = with_confidences(distinct);
    auto asc = sort_indices(fixture, {});
    auto desc = sort_indices(fixture, {SortField::Confidence, SortDirection::Descending});
    std::reverse(desc.begin(), desc.end());
    CHECK(asc == desc);
  }
}

TEST_CASE("compute_flags thresholds") {
  SUBCASE("low attention") {
    const auto flags = compute_flags(3, attention_scores(29.9));
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].kind == FlagKind::LowAttentionQuality);
    CHECK(flags[0].value == doctest::Approx(29.9));
    CHECK(compute_flags(3, attention_scores(30.1)).empty());
  }
  SUBCASE("possible untranslated") {
    ScoreSet s;
    s.similarity = 0.5;
    CHECK(compute_flags(10, s) == std::vector<DiagnosticFlag>{{FlagKind::PossibleUntranslated, 50.0}});
    CHECK(compute_flags(9, s).empty());
    s.similarity = 0.4999;
    CHECK(compute_flags(12, s).empty());
  }
  SUBCASE("reference divergent") {
    ScoreSet s;
    s.bleu = 0.2;
    CHECK(compute_flags(4, s) == std::vector<DiagnosticFlag>{{FlagKind::ReferenceDivergent, 20.0}});
    s.bleu = 0.3;
    CHECK(compute_flags(4, s).empty());
    s.bleu = 0.2;
    s.ap_in = std::log(0.45);  // attention not "normal" any more
    const auto flags = compute_flags(4, s);
    CHECK(std::none_of(flags.begin(), flags.end(),
                       [](const DiagnosticFlag &f) { return f.kind == FlagKind::ReferenceDivergent; }));
  }
  SUBCASE("no reference never diverges") {
    ScoreSet s;
    CHECK(compute_flags(4, s).empty());
  }
  SUBCASE("custom thresholds") {
    FlagThresholds t;
    t.low_attention_percent = 50.0;
    CHECK(compute_flags(3, attention_scores(40.0), t).size() == 1);
  }
  SUBCASE("verbatim long copy") {
    std::vector<std::string> toks;
    for (int k = 0; k < 12; ++k) toks.push_back("w" + std::to_string(k));
    AttentionMatrix id(12, 12);
    for (std::size_t k = 0; k < 12; ++k) id.at(k, k) = 1.0;
    const auto rec = make_record("v", toks, toks, id);
    const auto s = score_record(rec);
    CHECK(s.has_flag(FlagKind::PossibleUntranslated));
    CHECK(compute_flags(rec, s) == s.flags);
  }
}

TEST_CASE("pair_datasets") {
  gen::Rng rng(44);
  const auto a = score_dataset(gen::dataset(rng, 10, "A"));

  SUBCASE("identical datasets pair each record with itself") {
    const auto pairs = pair_datasets(a, a);
    REQUIRE(pairs.size() == 10);
    CHECK(pairs[3].record_a == pairs[3].record_b);
    CHECK(pairs[3].source_id == a.dataset.records[3].id);
  }
  SUBCASE("different hypotheses over the same sources") {
    Dataset other = a.dataset;
    other.system_name = "B";
    for (auto &r : other.records) {
      r.hyp_tokens.push_back("extra");
      AttentionMatrix m(r.hyp_tokens.size(), r.src_tokens.size(), 1.0 / static_cast<double>(r.src_tokens.size()));
      r.attention = m;
    }
    const auto pairs = pair_datasets(a, score_dataset(other));
    CHECK(pairs.size() == 10);
    CHECK(pairs[0].record_b.hypothesis_length() == pairs[0].record_a.hypothesis_length() + 1);
  }
  SUBCASE("source mismatch names the position") {
    Dataset other = a.dataset;
    other.records[5].src_tokens.push_back("different");
    other.records[5].attention = AttentionMatrix(other.records[5].hyp_tokens.size(), other.records[5].src_tokens.size());
    try {
      pair_datasets(a, score_dataset(other));
      FAIL("expected PairingError");
    } catch (const PairingError &e) {
      CHECK(e.position() == 5);
      CHECK(std::string(e.what()).find("position 5") != std::string::npos);
    }
  }
  SUBCASE("length mismatch") {
    Dataset shorter = a.dataset;
    shorter.records.pop_back();
    CHECK_THROWS_AS(pair_datasets(a, score_dataset(shorter)), PairingError);
  }
}

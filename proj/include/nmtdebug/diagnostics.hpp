#pragma once

#include <cstddef>
#include <vector>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/scores.hpp"

namespace nmtdebug {

/// Thresholds for the debugging recipes. Percent values are on the 0-100
/// display scale.
struct FlagThresholds {
  // Any of confidence, CDP, AP_in, AP_out below this percent.
  double low_attention_percent = 30.0;
  // Long hypotheses with at least this much overlap.
  double untranslated_overlap_percent = 50.0;
  std::size_t untranslated_min_length = 10;
  // BLEU below this many points while all attention percents stay at or above
  // divergent_attention_percent.
  double divergent_bleu_points = 25.0;
  double divergent_attention_percent = 50.0;
};

/// Pure function of the record's hypothesis length and its scores; the
/// `flags` member of `scores` is ignored. Result is ordered by FlagKind.
std::vector<DiagnosticFlag> compute_flags(std::size_t hyp_length, const ScoreSet &scores,
                                          const FlagThresholds &thresholds = {});

inline std::vector<DiagnosticFlag> compute_flags(const AlignmentRecord &record, const ScoreSet &scores,
                                                 const FlagThresholds &thresholds = {}) {
  return compute_flags(record.hypothesis_length(), scores, thresholds);
}

}  // namespace nmtdebug

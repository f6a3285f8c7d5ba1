#pragma once

#include <cstddef>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/diagnostics.hpp"
#include "nmtdebug/scores.hpp"

namespace nmtdebug {

/// Similarity at or above which the overlap penalty enters the confidence.
inline constexpr double kOverlapPenaltyThreshold = 0.3;

/// -(1/L_s) * sum_i log(1 + (1 - cov_i)^2), cov_i the attention source token i
/// receives over all hypothesis tokens.
double coverage_deviation_penalty(const AttentionMatrix &attention);

/// (1/L_s) * sum over hypothesis rows of sum a*ln(a), each row first
/// renormalized to a distribution. All-zero rows contribute 0.
double absentmindedness_out(const AttentionMatrix &attention);

/// Same as absentmindedness_out over source columns.
double absentmindedness_in(const AttentionMatrix &attention);

/// (0.8 + 0.01 L_t) (3 - 5(1 - S)) (0.7 + S) tan(S). Negative for
/// S in [0.3, 0.4); left unclamped.
double overlap_penalty(std::size_t hyp_length, double similarity);

double confidence(double cdp, double ap_out, double ap_in, std::size_t hyp_length, double similarity);

/// 100 * exp(log_score), clamped to [0, 100].
double to_percent(double log_score);

/// Every field of the score set. BLEU is computed only when the record has a
/// reference and never feeds into confidence.
ScoreSet score_record(const AlignmentRecord &record, const FlagThresholds &thresholds = {});

}  // namespace nmtdebug

#include "nmtdebug/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nmtdebug/bleu.hpp"
#include "nmtdebug/similarity.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug {

namespace {

constexpr double kRenormalizeTolerance = 1e-9;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Sum of p*ln(p) over one distribution given as `n` weights via `weight(k)`.
template <typename WeightAt>
double negative_entropy(std::size_t n, WeightAt weight) {
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += weight(k);
  if (total == 0.0) return 0.0;
  const double scale = std::abs(total - 1.0) > kRenormalizeTolerance ? 1.0 / total : 1.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += xlogx(weight(k) * scale);
  return sum;
}

}  // namespace

double coverage_deviation_penalty(const AttentionMatrix &attention) {
  const std::size_t src_len = attention.cols();
  if (src_len == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < src_len; ++i) {
    const double deviation = 1.0 - attention.col_sum(i);
    sum += std::log1p(deviation * deviation);
  }
  return sum == 0.0 ? 0.0 : -sum / static_cast<double>(src_len);
}

double absentmindedness_out(const AttentionMatrix &attention) {
  const std::size_t src_len = attention.cols();
  if (src_len == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < attention.rows(); ++j)
    sum += negative_entropy(src_len, [&](std::size_t i) { return attention.at(j, i); });
  return std::min(0.0, sum / static_cast<double>(src_len));
}

double absentmindedness_in(const AttentionMatrix &attention) {
  const std::size_t src_len = attention.cols();
  if (src_len == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < src_len; ++i)
    sum += negative_entropy(attention.rows(), [&](std::size_t j) { return attention.at(j, i); });
  return std::min(0.0, sum / static_cast<double>(src_len));
}

double overlap_penalty(std::size_t hyp_length, double similarity) {
  return (0.8 + static_cast<double>(hyp_length) * 0.01) * (3.0 - (1.0 - similarity) * 5.0) * (0.7 + similarity) *
         std::tan(similarity);
}

double confidence(double cdp, double ap_out, double ap_in, std::size_t hyp_length, double similarity) {
  const double base = cdp + ap_out + ap_in;
  if (similarity < kOverlapPenaltyThreshold) return base;
  return base - overlap_penalty(hyp_length, similarity);
}

double to_percent(double log_score) { return std::clamp(100.0 * std::exp(log_score), 0.0, 100.0); }

ScoreSet score_record(const AlignmentRecord &record, const FlagThresholds &thresholds) {
  ScoreSet s;
  s.cdp = coverage_deviation_penalty(record.attention);
  s.ap_out = absentmindedness_out(record.attention);
  s.ap_in = absentmindedness_in(record.attention);
  s.similarity = similarity(record.source_text(), record.hypothesis_text());
  const std::size_t hyp_len = record.hypothesis_length();
  if (s.similarity >= kOverlapPenaltyThreshold) s.op = overlap_penalty(hyp_len, s.similarity);
  s.confidence = confidence(s.cdp, s.ap_out, s.ap_in, hyp_len, s.similarity);
  if (record.ref_text) {
    const auto ref_tokens = split_tokens(*record.ref_text);
    if (!ref_tokens.empty()) s.bleu = sentence_bleu(record.hyp_tokens, ref_tokens).value;
  }
  s.flags = compute_flags(hyp_len, s, thresholds);
  return s;
}

}  // namespace nmtdebug

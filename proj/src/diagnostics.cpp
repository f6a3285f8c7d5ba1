#include "nmtdebug/diagnostics.hpp"

#include <algorithm>

#include "nmtdebug/metrics.hpp"

namespace nmtdebug {

std::string_view flag_name(FlagKind kind) {
  switch (kind) {
    case FlagKind::LowAttentionQuality:
      return "LOW_ATTENTION_QUALITY";
    case FlagKind::PossibleUntranslated:
      return "POSSIBLE_UNTRANSLATED";
    case FlagKind::ReferenceDivergent:
      return "REFERENCE_DIVERGENT";
  }
  return "UNKNOWN";
}

std::optional<FlagKind> parse_flag_name(std::string_view name) {
  for (auto kind : {FlagKind::LowAttentionQuality, FlagKind::PossibleUntranslated, FlagKind::ReferenceDivergent})
    if (flag_name(kind) == name) return kind;
  return std::nullopt;
}

bool ScoreSet::has_flag(FlagKind kind) const {
  return std::any_of(flags.begin(), flags.end(), [kind](const DiagnosticFlag &f) { return f.kind == kind; });
}

std::vector<DiagnosticFlag> compute_flags(std::size_t hyp_length, const ScoreSet &scores,
                                          const FlagThresholds &thresholds) {
  std::vector<DiagnosticFlag> flags;
  const double lowest_attention = std::min({to_percent(scores.confidence), to_percent(scores.cdp),
                                            to_percent(scores.ap_in), to_percent(scores.ap_out)});
  if (lowest_attention < thresholds.low_attention_percent)
    flags.push_back({FlagKind::LowAttentionQuality, lowest_attention});

  const double overlap = scores.overlap_percent();
  if (hyp_length >= thresholds.untranslated_min_length && overlap >= thresholds.untranslated_overlap_percent)
    flags.push_back({FlagKind::PossibleUntranslated, overlap});

  if (scores.bleu) {
    const double points = 100.0 * *scores.bleu;
    if (points < thresholds.divergent_bleu_points && lowest_attention >= thresholds.divergent_attention_percent)
      flags.push_back({FlagKind::ReferenceDivergent, points});
  }
  return flags;
}

}  // namespace nmtdebug

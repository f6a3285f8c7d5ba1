#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace nmtdebug {

enum class FlagKind {
  LowAttentionQuality,
  PossibleUntranslated,
  ReferenceDivergent,
};

std::string_view flag_name(FlagKind kind);
std::optional<FlagKind> parse_flag_name(std::string_view name);

/// A raised diagnostic and the value that triggered it: the lowest attention
/// percent, the overlap percent, or the BLEU points respectively.
struct DiagnosticFlag {
  FlagKind kind;
  double value;

  bool operator==(const DiagnosticFlag &) const = default;
};

/// Per-record scores. Penalties and confidence are natural-log scores
/// (0 is ideal); use to_percent() for display.
struct ScoreSet {
  double cdp = 0.0;
  double ap_out = 0.0;
  double ap_in = 0.0;
  double similarity = 0.0;
  std::optional<double> op;  // present iff similarity >= 0.3
  double confidence = 0.0;
  std::optional<double> bleu;
  std::vector<DiagnosticFlag> flags;

  double overlap_percent() const { return 100.0 * similarity; }
  bool has_flag(FlagKind kind) const;

  bool operator==(const ScoreSet &) const = default;
};

}  // namespace nmtdebug

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/dataset_index.hpp"
#include "nmtdebug/scores.hpp"

namespace nmtdebug {

struct RenderOptions {
  std::size_t max_width = 120;
  // One glyph (UTF-8 string) per weight bucket, lightest first.
  std::vector<std::string> shade_ramp{" ", "░", "▒", "▓", "█"};
  bool color = false;
  std::size_t max_label_width = 16;
};

/// Weights below or at this value get no alignment line in vector output.
inline constexpr double kDrawThreshold = 0.05;

/// Bucket of `weight` when [0, max_weight] is cut into `buckets` equal
/// intervals; the top interval is closed.
std::size_t shade_bucket(double weight, double max_weight, std::size_t buckets);

/// Terminal grid: a legend of numbered source tokens, then one row per
/// hypothesis token with one shade glyph per source token. Columns beyond
/// max_width are cut and marked with "…".
std::string render_matrix_text(const AlignmentRecord &record, const RenderOptions &options = {});

/// Stroke opacity for an alignment line of `weight`.
double line_opacity(double weight, double max_weight);

std::string render_record_svg(const AlignmentRecord &record, const ScoreSet &scores);
std::string render_comparison_svg(const ComparisonPair &pair);

}  // namespace nmtdebug

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

namespace nmtdebug {

inline constexpr std::size_t kBleuMaxOrder = 4;

struct BleuScore {
  double value = 0.0;
  // Modified n-gram precision per order; orders the hypothesis is too short
  // for are left at 0 and excluded from the geometric mean.
  std::array<double, kBleuMaxOrder> precisions{};
  std::size_t orders_used = 0;
  double brevity_penalty = 1.0;
};

/// Sentence-level BLEU-4 against a single reference. Unigram precision is
/// unsmoothed (no unigram overlap scores 0); orders 2-4 use add-one
/// smoothing. Throws std::invalid_argument on an empty side.
BleuScore sentence_bleu(std::span<const std::string> hyp_tokens, std::span<const std::string> ref_tokens);

}  // namespace nmtdebug

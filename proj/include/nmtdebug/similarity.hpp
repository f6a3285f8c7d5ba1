#pragma once

#include <cstddef>
#include <string_view>

namespace nmtdebug {

/// Half-open code point ranges into the source and hypothesis texts.
struct MatchSpan {
  std::size_t src_begin = 0;
  std::size_t src_end = 0;
  std::size_t hyp_begin = 0;
  std::size_t hyp_end = 0;

  std::size_t length() const { return hyp_end - hyp_begin; }
  bool operator==(const MatchSpan &) const = default;
};

/// Longest common contiguous run of two code point sequences, restricted to
/// a[a_lo, a_hi) and b[b_lo, b_hi). Ties go to the smallest start in `a`,
/// then the smallest start in `b`.
struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};
Block find_longest_match(std::u32string_view a, std::u32string_view b, std::size_t a_lo, std::size_t a_hi,
                         std::size_t b_lo, std::size_t b_hi);

/// Total characters matched by Ratcliff-Obershelp: take the longest common
/// block, recurse on the unmatched left and right remainders.
std::size_t matched_characters(std::u32string_view a, std::u32string_view b);

/// Ratcliff-Obershelp ratio 2M / (|a| + |b|) over case-folded UTF-8 text.
/// Symmetric in its arguments; 0 when both are empty.
double similarity(std::string_view src_text, std::string_view hyp_text);

/// Leftmost-in-hypothesis, then leftmost-in-source longest common substring
/// of the case-folded texts. Zero length when no character is shared.
MatchSpan longest_match_span(std::string_view src_text, std::string_view hyp_text);

}  // namespace nmtdebug

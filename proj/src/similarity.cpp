#include "nmtdebug/similarity.hpp"

#include <unordered_map>
#include <utility>
#include <vector>

#include "nmtdebug/text.hpp"

namespace nmtdebug {

namespace {

using PositionIndex = std::unordered_map<char32_t, std::vector<std::size_t>>;

PositionIndex index_positions(std::u32string_view b) {
  PositionIndex index;
  for (std::size_t j = 0; j < b.size(); ++j) index[b[j]].push_back(j);
  return index;
}

// j2len[j] holds the length of the match ending at a[i-1], b[j]; only
// positions where a[i] occurs in b are visited per row.
Block longest_block(std::u32string_view a, const PositionIndex &b_index, std::size_t a_lo, std::size_t a_hi,
                    std::size_t b_lo, std::size_t b_hi) {
  Block best{a_lo, b_lo, 0};
  std::unordered_map<std::size_t, std::size_t> j2len;
  std::unordered_map<std::size_t, std::size_t> next;
  for (std::size_t i = a_lo; i < a_hi; ++i) {
    next.clear();
    const auto it = b_index.find(a[i]);
    if (it != b_index.end()) {
      for (std::size_t j : it->second) {
        if (j < b_lo) continue;
        if (j >= b_hi) break;
        std::size_t k = 1;
        if (j > 0) {
          const auto prev = j2len.find(j - 1);
          if (prev != j2len.end()) k = prev->second + 1;
        }
        next[j] = k;
        if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
      }
    }
    std::swap(j2len, next);
  }
  return best;
}

std::size_t matched_in(std::u32string_view a, const PositionIndex &b_index, std::size_t a_lo, std::size_t a_hi,
                       std::size_t b_lo, std::size_t b_hi) {
  std::size_t total = 0;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> pending{
      {{a_lo, a_hi}, {b_lo, b_hi}}};
  while (!pending.empty()) {
    const auto [ar, br] = pending.back();
    pending.pop_back();
    const Block blk = longest_block(a, b_index, ar.first, ar.second, br.first, br.second);
    if (blk.size == 0) continue;
    total += blk.size;
    if (ar.first < blk.a && br.first < blk.b) pending.push_back({{ar.first, blk.a}, {br.first, blk.b}});
    if (blk.a + blk.size < ar.second && blk.b + blk.size < br.second)
      pending.push_back({{blk.a + blk.size, ar.second}, {blk.b + blk.size, br.second}});
  }
  return total;
}

}  // namespace

Block find_longest_match(std::u32string_view a, std::u32string_view b, std::size_t a_lo, std::size_t a_hi,
                         std::size_t b_lo, std::size_t b_hi) {
  return longest_block(a, index_positions(b), a_lo, a_hi, b_lo, b_hi);
}

std::size_t matched_characters(std::u32string_view a, std::u32string_view b) {
  return matched_in(a, index_positions(b), 0, a.size(), 0, b.size());
}

double similarity(std::string_view src_text, std::string_view hyp_text) {
  auto first = fold_case(decode_utf8(src_text));
  auto second = fold_case(decode_utf8(hyp_text));
  const std::size_t total = first.size() + second.size();
  if (total == 0) return 0.0;
  // The recursion depends on which side wins ties; a fixed argument order
  // makes the ratio symmetric.
  if (second < first) std::swap(first, second);
  const std::size_t matched = matched_characters(first, second);
  return 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

MatchSpan longest_match_span(std::string_view src_text, std::string_view hyp_text) {
  const auto src = fold_case(decode_utf8(src_text));
  const auto hyp = fold_case(decode_utf8(hyp_text));
  const Block blk = find_longest_match(hyp, src, 0, hyp.size(), 0, src.size());
  if (blk.size == 0) return {};
  return {blk.b, blk.b + blk.size, blk.a, blk.a + blk.size};
}

}  // namespace nmtdebug

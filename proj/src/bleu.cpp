#include "nmtdebug/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace nmtdebug {

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> count_ngrams(std::span<const std::string> tokens, std::size_t order) {
  std::map<Ngram, std::size_t> counts;
  if (tokens.size() < order) return counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + order)];
  return counts;
}

}  // namespace

BleuScore sentence_bleu(std::span<const std::string> hyp_tokens, std::span<const std::string> ref_tokens) {
  if (hyp_tokens.empty()) throw std::invalid_argument("BLEU: empty hypothesis");
  if (ref_tokens.empty()) throw std::invalid_argument("BLEU: empty reference");

  BleuScore score;
  const double hyp_len = static_cast<double>(hyp_tokens.size());
  const double ref_len = static_cast<double>(ref_tokens.size());
  score.brevity_penalty = hyp_len < ref_len ? std::exp(1.0 - ref_len / hyp_len) : 1.0;

  double log_sum = 0.0;
  for (std::size_t order = 1; order <= kBleuMaxOrder; ++order) {
    if (hyp_tokens.size() < order) break;
    const auto hyp_counts = count_ngrams(hyp_tokens, order);
    const auto ref_counts = count_ngrams(ref_tokens, order);
    std::size_t matched = 0;
    for (const auto &[gram, count] : hyp_counts) {
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    const std::size_t total = hyp_tokens.size() - order + 1;
    double precision = 0.0;
    if (order == 1) {
      if (matched == 0) {
        score.precisions[0] = 0.0;
        score.orders_used = 1;
        score.value = 0.0;
        return score;
      }
      precision = static_cast<double>(matched) / static_cast<double>(total);
    } else {
      precision = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
    }
    score.precisions[order - 1] = precision;
    score.orders_used = order;
    log_sum += std::log(precision);
  }
  score.value = score.brevity_penalty * std::exp(log_sum / static_cast<double>(score.orders_used));
  return score;
}

}  // namespace nmtdebug

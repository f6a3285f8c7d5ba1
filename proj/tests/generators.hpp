#pragma once

// Seeded random fixtures for property-style tests.

#include <random>
#include <string>
#include <vector>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/dataset_index.hpp"
#include "nmtdebug/text.hpp"
#include "oracles.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double unit(Rng &rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Mixture of the shapes that matter to the metrics: stochastic rows, one-hot
// rows, sparse rows with exact zeros, all-zero rows, and unnormalized rows.
inline oracle::Matrix matrix(Rng &rng, std::size_t rows, std::size_t cols) {
  oracle::Matrix m(rows, std::vector<double>(cols, 0.0));
  const auto style = uniform(rng, 0, 4);
  for (auto &row : m) {
    const auto row_style = style == 4 ? uniform(rng, 0, 3) : style;
    switch (row_style) {
      case 0: {  // softmax-ish distribution
        double sum = 0.0;
        for (auto &v : row) sum += v = std::exp(4.0 * unit(rng));
        for (auto &v : row) v /= sum;
        break;
      }
      case 1:  // one-hot
        row[uniform(rng, 0, cols - 1)] = 1.0;
        break;
      case 2: {  // sparse, sometimes all zero
        for (auto &v : row)
          if (unit(rng) < 0.3) v = unit(rng);
        break;
      }
      default:  // unnormalized positive mass
        for (auto &v : row) v = 3.0 * unit(rng);
        break;
    }
  }
  return m;
}

inline nmtdebug::AttentionMatrix to_attention(const oracle::Matrix &m) { return nmtdebug::AttentionMatrix::from_rows(m); }

inline std::string word(Rng &rng, std::size_t max_len = 6) {
  static const std::vector<std::string> letters = [] {
    std::vector<std::string> out;
    for (char c : std::string("abcdeABCDE0123,.-")) out.emplace_back(1, c);
    out.insert(out.end(), {"ū", "š", "č", "Ž", "д", "Д"});
    return out;
  }();
  std::string w;
  const auto len = uniform(rng, 1, max_len);
  for (std::size_t k = 0; k < len; ++k) w += letters[uniform(rng, 0, letters.size() - 1)];
  return w;
}

inline std::vector<std::string> sentence(Rng &rng, std::size_t min_len, std::size_t max_len) {
  std::vector<std::string> tokens(uniform(rng, min_len, max_len));
  for (auto &t : tokens) t = word(rng);
  return tokens;
}

inline nmtdebug::AlignmentRecord record(Rng &rng, std::string id, std::size_t max_len = 12) {
  auto src = sentence(rng, 1, max_len);
  std::vector<std::string> hyp;
  const auto mode = uniform(rng, 0, 3);
  if (mode == 0) {
    hyp = src;  // verbatim copy
  } else if (mode == 1) {
    hyp = src;
    for (auto &t : hyp)
      if (unit(rng) < 0.4) t = word(rng);
  } else {
    hyp = sentence(rng, 1, max_len);
  }
  auto m = matrix(rng, hyp.size(), src.size());
  std::optional<std::string> ref;
  if (unit(rng) < 0.5) ref = nmtdebug::join_tokens(sentence(rng, 1, max_len));
  return nmtdebug::make_record(std::move(id), std::move(src), std::move(hyp), to_attention(m), std::move(ref));
}

inline nmtdebug::Dataset dataset(Rng &rng, std::size_t n, const std::string &name = "sys") {
  nmtdebug::Dataset d{name, {}};
  for (std::size_t k = 0; k < n; ++k) d.records.push_back(record(rng, "r" + std::to_string(k)));
  return d;
}

}  // namespace gen

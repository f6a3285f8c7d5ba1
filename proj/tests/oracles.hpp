#pragma once

// Brute-force reference implementations used to freeze expected values and to
// cross-check the library. Nothing here calls into nmtdebug metric code.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // [hyp j][src i]

inline double cdp(const Matrix &a) {
  const std::size_t ls = a.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < ls; ++i) {
    double received = 0.0;
    for (const auto &row : a) received += row[i];
    total += std::log(1.0 + (1.0 - received) * (1.0 - received));
  }
  return -total / static_cast<double>(ls);
}

inline double plogp_sum(std::vector<double> dist) {
  double s = 0.0;
  for (double v : dist) s += v;
  if (s == 0.0) return 0.0;
  if (std::fabs(s - 1.0) > 1e-9)
    for (double &v : dist) v /= s;
  double out = 0.0;
  for (double v : dist)
    if (v != 0.0) out += v * std::log(v);
  return out;
}

inline double ap_out(const Matrix &a) {
  const std::size_t ls = a.front().size();
  double total = 0.0;
  for (const auto &row : a) total += plogp_sum(row);
  return total / static_cast<double>(ls);
}

inline double ap_in(const Matrix &a) {
  const std::size_t ls = a.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < ls; ++i) {
    std::vector<double> column;
    for (const auto &row : a) column.push_back(row[i]);
    total += plogp_sum(column);
  }
  return total / static_cast<double>(ls);
}

inline double op(double lt, double s) { return (0.8 + lt / 100.0) * (3.0 - 5.0 * (1.0 - s)) * (0.7 + s) * std::tan(s); }

// Longest common substring by full dynamic programming table. Ties: smallest
// start in `a`, then smallest start in `b`.
struct Lcs {
  std::size_t a = 0, b = 0, len = 0;
};

inline Lcs longest_common_substring(const std::string &a, const std::string &b, std::size_t alo, std::size_t ahi,
                                    std::size_t blo, std::size_t bhi) {
  Lcs best{alo, blo, 0};
  std::vector<std::vector<std::size_t>> dp(ahi - alo + 1, std::vector<std::size_t>(bhi - blo + 1, 0));
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      if (a[i] != b[j]) continue;
      const std::size_t len = dp[i - alo][j - blo] + 1;
      dp[i - alo + 1][j - blo + 1] = len;
      const std::size_t start_a = i + 1 - len, start_b = j + 1 - len;
      if (len > best.len || (len == best.len && (start_a < best.a || (start_a == best.a && start_b < best.b))))
        best = {start_a, start_b, len};
    }
  }
  return best;
}

inline std::size_t ro_matches(const std::string &a, const std::string &b, std::size_t alo, std::size_t ahi,
                              std::size_t blo, std::size_t bhi) {
  if (alo >= ahi || blo >= bhi) return 0;
  const Lcs m = longest_common_substring(a, b, alo, ahi, blo, bhi);
  if (m.len == 0) return 0;
  return m.len + ro_matches(a, b, alo, m.a, blo, m.b) + ro_matches(a, b, m.a + m.len, ahi, m.b + m.len, bhi);
}

inline std::string lower_ascii(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ASCII-only Ratcliff-Obershelp ratio with the lexicographically smaller
// folded string as the tie-breaking side.
inline double ro_ratio(const std::string &x, const std::string &y) {
  std::string a = lower_ascii(x), b = lower_ascii(y);
  if (a.empty() && b.empty()) return 0.0;
  if (b < a) std::swap(a, b);
  const std::size_t m = ro_matches(a, b, 0, a.size(), 0, b.size());
  return 2.0 * static_cast<double>(m) / static_cast<double>(a.size() + b.size());
}

// Sentence BLEU-4 by scanning: clipped counts via pairwise position
// comparison, add-one smoothing for orders >= 2, orders the hypothesis is too
// short for skipped, zero unigram overlap scores 0.
inline double bleu(const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
  const auto same = [](const std::vector<std::string> &x, std::size_t i, const std::vector<std::string> &y,
                       std::size_t j, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
      if (x[i + k] != y[j + k]) return false;
    return true;
  };
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    if (hyp.size() < n) break;
    const std::size_t total = hyp.size() - n + 1;
    std::size_t matched = 0;
    for (std::size_t i = 0; i < total; ++i) {
      bool seen = false;
      for (std::size_t e = 0; e < i && !seen; ++e) seen = same(hyp, e, hyp, i, n);
      if (seen) continue;
      std::size_t in_hyp = 0, in_ref = 0;
      for (std::size_t k = 0; k < total; ++k) in_hyp += same(hyp, k, hyp, i, n);
      for (std::size_t k = 0; k + n <= ref.size(); ++k) in_ref += same(ref, k, hyp, i, n);
      matched += std::min(in_hyp, in_ref);
    }
    double p;
    if (n == 1) {
      if (matched == 0) return 0.0;
      p = static_cast<double>(matched) / static_cast<double>(total);
    } else {
      p = (static_cast<double>(matched) + 1.0) / (static_cast<double>(total) + 1.0);
    }
    log_sum += std::log(p);
    ++used;
  }
  const double c = static_cast<double>(hyp.size()), r = static_cast<double>(ref.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum / used);
}

}  // namespace oracle

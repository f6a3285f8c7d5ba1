#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmtdebug {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, one per
// offending byte, so decoding never fails.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// Simple one-to-one case folding (ASCII, Latin-1, Latin Extended-A, Greek,
// Cyrillic). Length preserving, so indices into folded text are indices into
// the original.
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view text);

std::string join_tokens(std::span<const std::string> tokens);
std::vector<std::string> split_tokens(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
// Strict parse: the whole of `text` must be consumed.
bool parse_double(std::string_view text, double &out);

}  // namespace nmtdebug

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmtdebug {

/// Row-major L_t x L_s attention weights: at(j, i) is the weight between
/// hypothesis token j and source token i.
class AttentionMatrix {
 public:
  AttentionMatrix() = default;
  AttentionMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws std::invalid_argument on ragged rows.
  static AttentionMatrix from_rows(const std::vector<std::vector<double>> &rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double at(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }
  double &at(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> values() const { return data_; }

  double row_sum(std::size_t r) const;
  double col_sum(std::size_t c) const;
  double max_value() const;

  bool operator==(const AttentionMatrix &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct AlignmentRecord {
  std::string id;
  std::vector<std::string> src_tokens;
  std::vector<std::string> hyp_tokens;
  AttentionMatrix attention;
  std::optional<std::string> ref_text;

  std::size_t source_length() const { return src_tokens.size(); }
  std::size_t hypothesis_length() const { return hyp_tokens.size(); }
  std::string source_text() const;
  std::string hypothesis_text() const;

  bool operator==(const AlignmentRecord &) const = default;
};

struct Dataset {
  std::string system_name;
  std::vector<AlignmentRecord> records;

  bool operator==(const Dataset &) const = default;
};

/// Builds a record and enforces its invariants: non-empty whitespace-free
/// tokens, an L_t x L_s matrix of finite non-negative weights, and no TAB or
/// newline in the id or reference. An empty reference is stored as absent.
/// Throws RecordError.
AlignmentRecord make_record(std::string id, std::vector<std::string> src_tokens,
                            std::vector<std::string> hyp_tokens, AttentionMatrix attention,
                            std::optional<std::string> ref_text = std::nullopt);

/// Throws RecordError if the record breaks an invariant.
void check_record(const AlignmentRecord &record);

/// Non-fatal findings: row sums off by more than 1e-3, all-zero rows, and
/// weights above 1 + 1e-3.
std::vector<std::string> validate_record(const AlignmentRecord &record);

inline constexpr double kRowSumTolerance = 1e-3;

// Canonical line-record format: one record per line, TAB separated fields
//   id, src tokens, hyp tokens, matrix ("r0c0,r0c1;r1c0,r1c1"), [reference]
// An empty id defaults to the record's 0-based position.
Dataset parse_canonical(std::istream &in, std::string system_name = {});
Dataset parse_canonical(std::string_view text, std::string system_name = {});
std::string serialize_canonical(const Dataset &dataset);

// Block-text format:
//   # <id>
//   S: <src tokens>
//   H: <hyp tokens>
//   R: <reference>        (optional)
//   <L_t lines of L_s space separated weights>
//   <blank line>
Dataset parse_block_text(std::istream &in, std::string system_name = {});
Dataset parse_block_text(std::string_view text, std::string system_name = {});
std::string serialize_block_text(const Dataset &dataset);

// Field-level helpers shared with the index file.
std::string format_matrix(const AttentionMatrix &matrix);
/// Returns std::nullopt and sets `reason` on malformed input.
std::optional<AttentionMatrix> parse_matrix(std::string_view text, std::string &reason);
std::string canonical_line(const AlignmentRecord &record, bool always_emit_reference);

}  // namespace nmtdebug

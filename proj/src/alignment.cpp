#include "nmtdebug/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "nmtdebug/errors.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug {

AttentionMatrix::AttentionMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

AttentionMatrix AttentionMatrix::from_rows(const std::vector<std::vector<double>> &rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  AttentionMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged attention rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  return m;
}

double AttentionMatrix::row_sum(std::size_t r) const {
  double sum = 0.0;
  for (double w : row(r)) sum += w;
  return sum;
}

double AttentionMatrix::col_sum(std::size_t c) const {
  double sum = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) sum += at(r, c);
  return sum;
}

double AttentionMatrix::max_value() const {
  if (data_.empty()) return 0.0;
  return *std::max_element(data_.begin(), data_.end());
}

std::string AlignmentRecord::source_text() const { return join_tokens(src_tokens); }
std::string AlignmentRecord::hypothesis_text() const { return join_tokens(hyp_tokens); }

namespace {

bool has_separator(std::string_view s) { return s.find_first_of("\t\n\r") != std::string_view::npos; }

void check_tokens(const AlignmentRecord &rec, const std::vector<std::string> &tokens, const char *side) {
  if (tokens.empty()) throw RecordError(rec.id, std::string(side) + " has no tokens");
  for (const auto &tok : tokens) {
    if (tok.empty()) throw RecordError(rec.id, std::string("empty ") + side + " token");
    if (tok.find_first_of(" \t\n\r") != std::string::npos)
      throw RecordError(rec.id, std::string(side) + " token contains whitespace: '" + tok + "'");
  }
}

}  // namespace

void check_record(const AlignmentRecord &record) {
  if (has_separator(record.id)) throw RecordError(record.id, "id contains a TAB or newline");
  check_tokens(record, record.src_tokens, "source");
  check_tokens(record, record.hyp_tokens, "hypothesis");
  const auto &m = record.attention;
  if (m.rows() != record.hyp_tokens.size() || m.cols() != record.src_tokens.size()) {
    std::ostringstream msg;
    msg << "attention is " << m.rows() << "x" << m.cols() << " but record has " << record.hyp_tokens.size()
        << " hypothesis and " << record.src_tokens.size() << " source tokens";
    throw RecordError(record.id, msg.str());
  }
  for (double w : m.values()) {
    if (!std::isfinite(w) || w < 0.0) throw RecordError(record.id, "attention weight " + format_double(w) + " is not finite and >= 0");
  }
  if (record.ref_text) {
    if (record.ref_text->empty()) throw RecordError(record.id, "empty reference must be absent");
    if (has_separator(*record.ref_text)) throw RecordError(record.id, "reference contains a TAB or newline");
  }
}

AlignmentRecord make_record(std::string id, std::vector<std::string> src_tokens, std::vector<std::string> hyp_tokens,
                            AttentionMatrix attention, std::optional<std::string> ref_text) {
  if (ref_text && ref_text->empty()) ref_text.reset();
  AlignmentRecord rec{std::move(id), std::move(src_tokens), std::move(hyp_tokens), std::move(attention),
                      std::move(ref_text)};
  check_record(rec);
  return rec;
}

std::vector<std::string> validate_record(const AlignmentRecord &record) {
  std::vector<std::string> warnings;
  const auto &m = record.attention;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double sum = m.row_sum(r);
    if (sum == 0.0) {
      warnings.push_back("row " + std::to_string(r) + " is all zero");
    } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
      warnings.push_back("row " + std::to_string(r) + " sums to " + format_double(sum));
    }
  }
  const double max = m.max_value();
  if (max > 1.0 + kRowSumTolerance) warnings.push_back("matrix contains weight " + format_double(max) + " > 1");
  return warnings;
}

std::string format_matrix(const AttentionMatrix &matrix) {
  std::string out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    if (r > 0) out.push_back(';');
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out += format_double(matrix.at(r, c));
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::optional<AttentionMatrix> parse_matrix(std::string_view text, std::string &reason) {
  if (text.empty()) {
    reason = "empty attention matrix";
    return std::nullopt;
  }
  std::vector<std::vector<double>> rows;
  for (auto row_text : split(text, ';')) {
    auto &row = rows.emplace_back();
    for (auto cell : split(row_text, ',')) {
      double v = 0.0;
      if (!parse_double(cell, v)) {
        reason = "row " + std::to_string(rows.size() - 1) + ": bad weight '" + std::string(cell) + "'";
        return std::nullopt;
      }
      row.push_back(v);
    }
    if (row.size() != rows.front().size()) {
      reason = "row " + std::to_string(rows.size() - 1) + " has " + std::to_string(row.size()) + " weights, expected " +
               std::to_string(rows.front().size());
      return std::nullopt;
    }
  }
  return AttentionMatrix::from_rows(rows);
}

std::string canonical_line(const AlignmentRecord &record, bool always_emit_reference) {
  std::string line = record.id;
  line.push_back('\t');
  line += record.source_text();
  line.push_back('\t');
  line += record.hypothesis_text();
  line.push_back('\t');
  line += format_matrix(record.attention);
  if (record.ref_text || always_emit_reference) {
    line.push_back('\t');
    if (record.ref_text) line += *record.ref_text;
  }
  return line;
}

std::string serialize_canonical(const Dataset &dataset) {
  std::string out;
  for (const auto &rec : dataset.records) {
    out += canonical_line(rec, false);
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

class DatasetBuilder {
 public:
  explicit DatasetBuilder(std::string system_name) { dataset_.system_name = std::move(system_name); }

  std::string id_or_default(std::string_view id) const {
    return id.empty() ? std::to_string(dataset_.records.size()) : std::string(id);
  }

  void add(std::size_t line, AlignmentRecord rec) {
    try {
      check_record(rec);
    } catch (const RecordError &e) {
      throw ParseError(line, rec.id, e.reason());
    }
    if (!ids_.insert(rec.id).second) throw ParseError(line, rec.id, "duplicate id");
    dataset_.records.push_back(std::move(rec));
  }

  Dataset finish() {
    if (dataset_.records.empty()) throw ParseError(0, {}, "empty dataset");
    return std::move(dataset_);
  }

 private:
  Dataset dataset_;
  std::unordered_set<std::string> ids_;
};

}  // namespace

Dataset parse_canonical(std::istream &in, std::string system_name) {
  DatasetBuilder builder(std::move(system_name));
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (is_blank(line)) continue;
    const auto fields = split(line, '\t');
    const std::string id = builder.id_or_default(fields[0]);
    if (fields.size() < 4 || fields.size() > 5)
      throw ParseError(line_no, id, "expected 4 or 5 TAB separated fields, found " + std::to_string(fields.size()));
    AlignmentRecord rec;
    rec.id = id;
    rec.src_tokens = split_tokens(fields[1]);
    rec.hyp_tokens = split_tokens(fields[2]);
    std::string reason;
    auto matrix = parse_matrix(fields[3], reason);
    if (!matrix) throw ParseError(line_no, id, reason);
    rec.attention = std::move(*matrix);
    if (fields.size() == 5 && !fields[4].empty()) rec.ref_text = std::string(fields[4]);
    builder.add(line_no, std::move(rec));
  }
  return builder.finish();
}

Dataset parse_canonical(std::string_view text, std::string system_name) {
  std::istringstream in{std::string(text)};
  return parse_canonical(in, std::move(system_name));
}

Dataset parse_block_text(std::istream &in, std::string system_name) {
  DatasetBuilder builder(std::move(system_name));
  std::vector<std::string> lines;
  for (std::string raw; std::getline(in, raw);) lines.emplace_back(strip_cr(raw));

  std::size_t pos = 0;
  const auto line_no = [&] { return pos + 1; };
  while (true) {
    while (pos < lines.size() && is_blank(lines[pos])) ++pos;
    if (pos >= lines.size()) break;

    const std::string_view header = lines[pos];
    if (header.empty() || header.front() != '#')
      throw ParseError(line_no(), {}, "expected block header '# <id>'");
    auto id_text = header.substr(1);
    while (!id_text.empty() && id_text.front() == ' ') id_text.remove_prefix(1);
    while (!id_text.empty() && id_text.back() == ' ') id_text.remove_suffix(1);
    AlignmentRecord rec;
    rec.id = builder.id_or_default(id_text);
    const std::size_t block_line = line_no();
    ++pos;

    const auto expect_prefixed = [&](std::string_view prefix) -> std::string_view {
      if (pos >= lines.size() || std::string_view(lines[pos]).substr(0, prefix.size()) != prefix)
        throw ParseError(line_no(), rec.id, "expected line starting with '" + std::string(prefix) + "'");
      return std::string_view(lines[pos++]).substr(prefix.size());
    };
    rec.src_tokens = split_tokens(expect_prefixed("S:"));
    rec.hyp_tokens = split_tokens(expect_prefixed("H:"));
    if (pos < lines.size() && std::string_view(lines[pos]).substr(0, 2) == "R:") {
      auto ref = std::string_view(lines[pos++]).substr(2);
      while (!ref.empty() && ref.front() == ' ') ref.remove_prefix(1);
      if (!ref.empty()) rec.ref_text = std::string(ref);
    }

    const std::size_t n_rows = rec.hyp_tokens.size();
    const std::size_t n_cols = rec.src_tokens.size();
    rec.attention = AttentionMatrix(n_rows, n_cols);
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (pos >= lines.size() || is_blank(lines[pos]))
        throw ParseError(line_no(), rec.id,
                         "matrix row " + std::to_string(r) + " missing: expected " + std::to_string(n_rows) + " rows");
      const auto cells = split_tokens(lines[pos]);
      if (cells.size() != n_cols)
        throw ParseError(line_no(), rec.id,
                         "matrix row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                             " weights, expected " + std::to_string(n_cols));
      for (std::size_t c = 0; c < n_cols; ++c) {
        double v = 0.0;
        if (!parse_double(cells[c], v))
          throw ParseError(line_no(), rec.id, "matrix row " + std::to_string(r) + ": bad weight '" + cells[c] + "'");
        rec.attention.at(r, c) = v;
      }
      ++pos;
    }
    if (pos < lines.size() && !is_blank(lines[pos]))
      throw ParseError(line_no(), rec.id, "expected blank line after " + std::to_string(n_rows) + " matrix rows");
    builder.add(block_line, std::move(rec));
  }
  return builder.finish();
}

Dataset parse_block_text(std::string_view text, std::string system_name) {
  std::istringstream in{std::string(text)};
  return parse_block_text(in, std::move(system_name));
}

std::string serialize_block_text(const Dataset &dataset) {
  std::string out;
  for (const auto &rec : dataset.records) {
    out += "# " + rec.id + "\n";
    out += "S: " + rec.source_text() + "\n";
    out += "H: " + rec.hypothesis_text() + "\n";
    if (rec.ref_text) out += "R: " + *rec.ref_text + "\n";
    for (std::size_t r = 0; r < rec.attention.rows(); ++r) {
      for (std::size_t c = 0; c < rec.attention.cols(); ++c) {
        if (c > 0) out.push_back(' ');
        out += format_double(rec.attention.at(r, c));
      }
      out.push_back('\n');
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace nmtdebug

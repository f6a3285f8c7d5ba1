#include "nmtdebug/index_file.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "nmtdebug/errors.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug {

namespace {

constexpr std::string_view kScoreKeys[] = {"cdp", "ap_out", "ap_in", "sim", "op", "conf", "bleu", "flags"};

std::string optional_value(const std::optional<double> &v) { return v ? format_double(*v) : "-"; }

std::string score_block(const ScoreSet &s) {
  std::string out;
  out += "cdp=" + format_double(s.cdp);
  out += " ap_out=" + format_double(s.ap_out);
  out += " ap_in=" + format_double(s.ap_in);
  out += " sim=" + format_double(s.similarity);
  out += " op=" + optional_value(s.op);
  out += " conf=" + format_double(s.confidence);
  out += " bleu=" + optional_value(s.bleu);
  out += " flags=";
  if (s.flags.empty()) {
    out += "-";
  } else {
    for (std::size_t i = 0; i < s.flags.size(); ++i) {
      if (i > 0) out += ",";
      out += std::string(flag_name(s.flags[i].kind)) + ":" + format_double(s.flags[i].value);
    }
  }
  return out;
}

std::vector<std::string_view> split_view(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (auto pos = text.find(sep); pos != std::string_view::npos; pos = text.find(sep, start)) {
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  parts.push_back(text.substr(start));
  return parts;
}

class IndexReader {
 public:
  explicit IndexReader(std::string_view bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t offset() const { return pos_; }

  // Next line without its terminator; `line_start` receives its offset.
  std::string_view next_line(std::size_t &line_start) {
    line_start = pos_;
    const auto nl = bytes_.find('\n', pos_);
    if (nl == std::string_view::npos) throw IndexFormatError(pos_, "truncated line (missing newline)");
    const auto line = bytes_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return line;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

double parse_number(std::string_view text, std::size_t offset, std::string_view what) {
  double v = 0.0;
  if (!parse_double(text, v)) throw IndexFormatError(offset, "bad " + std::string(what) + " value '" + std::string(text) + "'");
  return v;
}

std::optional<double> parse_optional(std::string_view text, std::size_t offset, std::string_view what) {
  if (text == "-") return std::nullopt;
  return parse_number(text, offset, what);
}

ScoreSet parse_score_block(std::string_view text, std::size_t offset) {
  const auto parts = split_view(text, ' ');
  if (parts.size() != std::size(kScoreKeys))
    throw IndexFormatError(offset, "expected " + std::to_string(std::size(kScoreKeys)) + " score fields");
  std::string_view values[std::size(kScoreKeys)];
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string_view::npos || parts[k].substr(0, eq) != kScoreKeys[k])
      throw IndexFormatError(offset, "expected score field '" + std::string(kScoreKeys[k]) + "'");
    values[k] = parts[k].substr(eq + 1);
  }
  ScoreSet s;
  s.cdp = parse_number(values[0], offset, "cdp");
  s.ap_out = parse_number(values[1], offset, "ap_out");
  s.ap_in = parse_number(values[2], offset, "ap_in");
  s.similarity = parse_number(values[3], offset, "sim");
  s.op = parse_optional(values[4], offset, "op");
  s.confidence = parse_number(values[5], offset, "conf");
  s.bleu = parse_optional(values[6], offset, "bleu");
  if (values[7] != "-") {
    for (auto item : split_view(values[7], ',')) {
      const auto colon = item.find(':');
      const auto kind = parse_flag_name(item.substr(0, colon));
      if (colon == std::string_view::npos || !kind)
        throw IndexFormatError(offset, "bad flag '" + std::string(item) + "'");
      s.flags.push_back({*kind, parse_number(item.substr(colon + 1), offset, "flag")});
    }
  }
  return s;
}

}  // namespace

std::string serialize_index(std::span<const ScoredDataset> sections) {
  std::string out;
  for (const auto &scored : sections) {
    out += kIndexMagic;
    out += '\t';
    out += kIndexFormatVersion;
    out += '\t' + scored.dataset.system_name + '\t' + std::to_string(scored.size()) + '\n';
    for (std::size_t i = 0; i < scored.size(); ++i) {
      out += canonical_line(scored.dataset.records[i], true);
      out += '\t';
      out += score_block(scored.scores[i]);
      out += '\n';
    }
  }
  return out;
}

std::string serialize_index(const ScoredDataset &scored) { return serialize_index(std::span(&scored, 1)); }

bool looks_like_index(std::string_view bytes) { return bytes.substr(0, kIndexMagic.size()) == kIndexMagic; }

std::vector<ScoredDataset> parse_index(std::string_view bytes) {
  if (bytes.empty()) throw IndexFormatError(0, "empty index file");
  IndexReader reader(bytes);
  std::vector<ScoredDataset> sections;
  while (!reader.at_end()) {
    std::size_t header_at = 0;
    const auto header = split_view(reader.next_line(header_at), '\t');
    if (header.empty() || header[0] != kIndexMagic) throw IndexFormatError(header_at, "missing index header");
    if (header.size() < 2) throw IndexFormatError(header_at, "header lacks a format version");
    if (header[1] != kIndexFormatVersion) throw IndexVersionError(std::string(header[1]));
    if (header.size() != 4) throw IndexFormatError(header_at, "malformed header");
    std::size_t count = 0;
    const auto [end, ec] = std::from_chars(header[3].data(), header[3].data() + header[3].size(), count);
    if (ec != std::errc() || end != header[3].data() + header[3].size() || header[3].empty())
      throw IndexFormatError(header_at, "bad record count '" + std::string(header[3]) + "'");

    ScoredDataset scored;
    scored.dataset.system_name = std::string(header[2]);
    std::unordered_set<std::string> ids;
    for (std::size_t k = 0; k < count; ++k) {
      if (reader.at_end())
        throw IndexFormatError(reader.offset(), "truncated: expected " + std::to_string(count) + " records, found " +
                                                    std::to_string(k));
      std::size_t line_at = 0;
      const auto fields = split_view(reader.next_line(line_at), '\t');
      if (fields.size() != 6) throw IndexFormatError(line_at, "expected 6 TAB separated fields");
      AlignmentRecord rec;
      rec.id = std::string(fields[0]);
      rec.src_tokens = split_tokens(fields[1]);
      rec.hyp_tokens = split_tokens(fields[2]);
      std::string reason;
      auto matrix = parse_matrix(fields[3], reason);
      if (!matrix) throw IndexFormatError(line_at, reason);
      rec.attention = std::move(*matrix);
      if (!fields[4].empty()) rec.ref_text = std::string(fields[4]);
      try {
        check_record(rec);
      } catch (const RecordError &e) {
        throw IndexFormatError(line_at, e.what());
      }
      if (!ids.insert(rec.id).second) throw IndexFormatError(line_at, "duplicate id '" + rec.id + "'");
      scored.scores.push_back(parse_score_block(fields[5], line_at));
      scored.dataset.records.push_back(std::move(rec));
    }
    sections.push_back(std::move(scored));
  }
  return sections;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path &path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot replace '" + path.string() + "'");
  }
}

void save_index(std::span<const ScoredDataset> sections, const std::filesystem::path &path) {
  write_file_atomic(path, serialize_index(sections));
}

void save_index(const ScoredDataset &scored, const std::filesystem::path &path) {
  write_file_atomic(path, serialize_index(scored));
}

std::vector<ScoredDataset> load_index_sections(const std::filesystem::path &path) {
  return parse_index(read_file(path));
}

ScoredDataset load_index(const std::filesystem::path &path) {
  auto sections = load_index_sections(path);
  if (sections.size() != 1)
    throw IndexFormatError(0, "expected one dataset section, found " + std::to_string(sections.size()));
  return std::move(sections.front());
}

}  // namespace nmtdebug

#include "nmtdebug/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nmtdebug/metrics.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug {

std::size_t shade_bucket(double weight, double max_weight, std::size_t buckets) {
  if (buckets <= 1 || max_weight <= 0.0 || weight <= 0.0) return 0;
  const auto bucket = static_cast<std::size_t>(std::floor(weight / max_weight * static_cast<double>(buckets)));
  return std::min(bucket, buckets - 1);
}

namespace {

std::size_t display_length(std::string_view s) { return decode_utf8(s).size(); }

std::string fit_label(const std::string &label, std::size_t width) {
  const auto cps = decode_utf8(label);
  if (cps.size() <= width) return label + std::string(width - cps.size(), ' ');
  return encode_utf8(std::u32string_view(cps).substr(0, width - 1)) + "…";
}

}  // namespace

std::string render_matrix_text(const AlignmentRecord &record, const RenderOptions &options) {
  const auto &m = record.attention;
  const std::vector<std::string> ramp = options.shade_ramp.empty() ? std::vector<std::string>{" "} : options.shade_ramp;
  const double max_weight = m.max_value();

  std::size_t label_width = 1;
  for (const auto &tok : record.hyp_tokens) label_width = std::max(label_width, display_length(tok));
  label_width = std::min(label_width, std::max<std::size_t>(options.max_label_width, 2));

  // label + " |" + cells + "|"
  const std::size_t frame = label_width + 3;
  const std::size_t room = options.max_width > frame + 1 ? options.max_width - frame : 1;
  const bool truncated = m.cols() > room;
  const std::size_t shown = truncated ? room - 1 : m.cols();

  std::string out = "source:";
  for (std::size_t i = 0; i < record.src_tokens.size(); ++i)
    out += " [" + std::to_string(i) + "]" + record.src_tokens[i];
  out += "\n";

  out += std::string(label_width + 2, ' ');
  for (std::size_t i = 0; i < shown; ++i) out += static_cast<char>('0' + i % 10);
  if (truncated) out += "…";
  out += "\n";

  for (std::size_t j = 0; j < m.rows(); ++j) {
    out += fit_label(record.hyp_tokens[j], label_width) + " |";
    for (std::size_t i = 0; i < shown; ++i) {
      const std::size_t bucket = shade_bucket(m.at(j, i), max_weight, ramp.size());
      if (options.color) {
        const std::size_t level = ramp.size() > 1 ? 232 + bucket * 23 / (ramp.size() - 1) : 255;
        out += "\x1b[38;5;" + std::to_string(level) + "m" + ramp[bucket] + "\x1b[0m";
      } else {
        out += ramp[bucket];
      }
    }
    if (truncated) out += "…";
    out += "|\n";
  }
  if (truncated) out += "(" + std::to_string(m.cols() - shown) + " more source tokens not shown)\n";
  return out;
}

double line_opacity(double weight, double max_weight) {
  const double scale = std::max(1.0, max_weight);
  return std::clamp(weight / scale, 0.0, 1.0);
}

namespace {

constexpr double kMargin = 20.0;
constexpr double kCharWidth = 9.0;
constexpr double kTokenPadding = 14.0;
constexpr double kMinTokenWidth = 36.0;
constexpr const char *kColorSingle = "#1f77b4";
constexpr const char *kColorA = "#ff7f0e";  // orange
constexpr const char *kColorB = "#2ca02c";  // green

std::string num(double v, int precision = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Horizontal centers of a token row.
struct RowLayout {
  std::vector<double> centers;
  double width = 0.0;
};

RowLayout layout_row(const std::vector<std::string> &tokens) {
  RowLayout row;
  double x = kMargin;
  for (const auto &tok : tokens) {
    const double w = std::max(kMinTokenWidth, static_cast<double>(display_length(tok)) * kCharWidth + kTokenPadding);
    row.centers.push_back(x + w / 2.0);
    x += w;
  }
  row.width = x + kMargin;
  return row;
}

void emit_tokens(std::string &out, const std::vector<std::string> &tokens, const RowLayout &row, double y,
                 const char *side, const char *fill) {
  out += "<g class=\"tokens " + std::string(side) + "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" fill=\"" +
         fill + "\">\n";
  for (std::size_t k = 0; k < tokens.size(); ++k)
    out += "<text class=\"token " + std::string(side) + "\" x=\"" + num(row.centers[k]) + "\" y=\"" + num(y) + "\">" +
           xml_escape(tokens[k]) + "</text>\n";
  out += "</g>\n";
}

void emit_lines(std::string &out, const AttentionMatrix &m, const RowLayout &src, const RowLayout &hyp, double y_src,
                double y_hyp, const char *system, const char *color) {
  const double max_weight = m.max_value();
  out += "<g class=\"alignments " + std::string(system) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\" fill=\"none\">\n";
  for (std::size_t j = 0; j < m.rows(); ++j) {
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double w = m.at(j, i);
      if (!(w > kDrawThreshold)) continue;
      out += "<path d=\"M" + num(src.centers[i]) + " " + num(y_src) + " L" + num(hyp.centers[j]) + " " + num(y_hyp) +
             "\" stroke-opacity=\"" + num(line_opacity(w, max_weight), 3) + "\"/>\n";
    }
  }
  out += "</g>\n";
}

std::string percent_text(double log_score) { return num(to_percent(log_score)) + "%"; }

std::vector<std::string> score_lines(const ScoreSet &s) {
  std::vector<std::string> lines{
      "Confidence: " + percent_text(s.confidence),
      "CDP: " + percent_text(s.cdp),
      "AP_out: " + percent_text(s.ap_out),
      "AP_in: " + percent_text(s.ap_in),
      "Overlap: " + num(s.overlap_percent()) + "%",
  };
  if (s.bleu) lines.push_back("BLEU: " + num(100.0 * *s.bleu));
  for (const auto &f : s.flags) lines.push_back("Flag: " + std::string(flag_name(f.kind)));
  return lines;
}

void emit_panel(std::string &out, const std::vector<std::string> &lines, double x, double y, const char *name,
                const char *fill) {
  out += "<g class=\"scores " + std::string(name) + "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" + fill +
         "\">\n";
  for (std::size_t k = 0; k < lines.size(); ++k)
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y + 18.0 * static_cast<double>(k)) + "\">" + xml_escape(lines[k]) +
           "</text>\n";
  out += "</g>\n";
}

std::string svg_open(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

}  // namespace

std::string render_record_svg(const AlignmentRecord &record, const ScoreSet &scores) {
  const auto src = layout_row(record.src_tokens);
  const auto hyp = layout_row(record.hyp_tokens);
  constexpr double y_src = 40.0, y_hyp = 200.0, y_panel = 250.0;

  std::vector<std::string> panel = score_lines(scores);
  const bool has_ref = record.ref_text.has_value();
  const double width = std::max({src.width, hyp.width, 420.0});
  const double height = y_panel + 18.0 * static_cast<double>(panel.size()) + (has_ref ? 30.0 : 0.0) + kMargin;

  std::string out = svg_open(width, height);
  out += "<title>" + xml_escape(record.id) + "</title>\n";
  emit_lines(out, record.attention, src, hyp, y_src + 10.0, y_hyp - 16.0, "single", kColorSingle);
  emit_tokens(out, record.src_tokens, src, y_src, "src", "#000000");
  emit_tokens(out, record.hyp_tokens, hyp, y_hyp, "hyp", "#000000");
  emit_panel(out, panel, kMargin, y_panel, "single", "#333333");
  if (has_ref) {
    const double y_ref = y_panel + 18.0 * static_cast<double>(panel.size()) + 12.0;
    out += "<g class=\"reference\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out += "<text x=\"" + num(kMargin) + "\" y=\"" + num(y_ref) + "\" fill=\"#555555\">Reference: " +
           xml_escape(*record.ref_text) + "</text>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_comparison_svg(const ComparisonPair &pair) {
  const auto src = layout_row(pair.record_a.src_tokens);
  const auto hyp_a = layout_row(pair.record_a.hyp_tokens);
  const auto hyp_b = layout_row(pair.record_b.hyp_tokens);
  constexpr double y_src = 40.0, y_a = 190.0, y_b = 300.0, y_panel = 350.0;

  auto panel_a = score_lines(pair.scores_a);
  auto panel_b = score_lines(pair.scores_b);
  panel_a.insert(panel_a.begin(), "Hypothesis 1");
  panel_b.insert(panel_b.begin(), "Hypothesis 2");
  const double panel_x_b = kMargin + 260.0;
  const double width = std::max({src.width, hyp_a.width, hyp_b.width, panel_x_b + 240.0});
  const double height = y_panel + 18.0 * static_cast<double>(std::max(panel_a.size(), panel_b.size())) + kMargin;

  std::string out = svg_open(width, height);
  out += "<title>" + xml_escape(pair.source_id) + "</title>\n";
  emit_lines(out, pair.record_a.attention, src, hyp_a, y_src + 10.0, y_a - 16.0, "a", kColorA);
  emit_lines(out, pair.record_b.attention, src, hyp_b, y_src + 10.0, y_b - 16.0, "b", kColorB);
  emit_tokens(out, pair.record_a.src_tokens, src, y_src, "src", "#000000");
  emit_tokens(out, pair.record_a.hyp_tokens, hyp_a, y_a, "hyp-a", kColorA);
  emit_tokens(out, pair.record_b.hyp_tokens, hyp_b, y_b, "hyp-b", kColorB);
  emit_panel(out, panel_a, kMargin, y_panel, "a", kColorA);
  emit_panel(out, panel_b, panel_x_b, y_panel, "b", kColorB);
  out += "</svg>\n";
  return out;
}

}  // namespace nmtdebug

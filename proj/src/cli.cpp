#include "nmtdebug/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nmtdebug/errors.hpp"
#include "nmtdebug/index_file.hpp"
#include "nmtdebug/metrics.hpp"
#include "nmtdebug/render.hpp"
#include "nmtdebug/service.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

bool same_thresholds(const FlagThresholds &a, const FlagThresholds &b) {
  return a.low_attention_percent == b.low_attention_percent &&
         a.untranslated_overlap_percent == b.untranslated_overlap_percent &&
         a.untranslated_min_length == b.untranslated_min_length &&
         a.divergent_bleu_points == b.divergent_bleu_points &&
         a.divergent_attention_percent == b.divergent_attention_percent;
}

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool first_line_is_block_header(std::string_view bytes) {
  std::size_t pos = bytes.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && bytes[pos] == '#';
}

void attach_references(Dataset &dataset, const std::filesystem::path &path, std::ostream &err) {
  const auto lines = read_lines(path);
  if (lines.size() != dataset.records.size())
    throw Error("reference file '" + path.string() + "' has " + std::to_string(lines.size()) +
                " lines but the dataset has " + std::to_string(dataset.records.size()) + " records");
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto &rec = dataset.records[k];
    std::string ref = lines[k];
    std::replace(ref.begin(), ref.end(), '\t', ' ');
    if (ref.find_first_not_of(' ') == std::string::npos) continue;
    if (rec.ref_text) {
      if (*rec.ref_text != ref)
        err << "warning: record '" << rec.id << "' has an in-record reference that differs from line " << k + 1
            << " of the reference file; keeping the in-record reference\n";
      continue;
    }
    rec.ref_text = std::move(ref);
  }
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string flag_list(const ScoreSet &s) {
  std::string out;
  for (const auto &f : s.flags) {
    if (!out.empty()) out += ",";
    out += flag_name(f.kind);
  }
  return out.empty() ? "-" : out;
}

std::string truncate_text(const std::string &text, std::size_t width) {
  const auto cps = decode_utf8(text);
  if (cps.size() <= width) return text;
  return encode_utf8(std::u32string_view(cps).substr(0, width - 1)) + "…";
}

std::size_t text_width(const std::string &s) { return decode_utf8(s).size(); }

void print_table(std::ostream &out, const std::vector<std::vector<std::string>> &rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto &row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], text_width(row[c]));
  for (const auto &row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - text_width(row[c]) + 2, ' ');
    }
    out << line << "\n";
  }
}

double mean_confidence_percent(const ScoredDataset &scored) {
  if (scored.size() == 0) return 0.0;
  double sum = 0.0;
  for (const auto &s : scored.scores) sum += to_percent(s.confidence);
  return sum / static_cast<double>(scored.size());
}

void print_summary(std::ostream &out, const ScoredDataset &scored) {
  std::size_t counts[3] = {0, 0, 0};
  for (const auto &s : scored.scores)
    for (const auto &f : s.flags) ++counts[static_cast<int>(f.kind)];
  out << "system: " << scored.dataset.system_name << "\n";
  out << "records: " << scored.size() << "\n";
  out << "mean confidence: " << pct(mean_confidence_percent(scored)) << "%\n";
  out << "flags:";
  for (auto kind : {FlagKind::LowAttentionQuality, FlagKind::PossibleUntranslated, FlagKind::ReferenceDivergent})
    out << " " << flag_name(kind) << "=" << counts[static_cast<int>(kind)];
  out << "\n";
}

ScoredDataset load_single(const CliConfig &config, std::ostream &err) {
  if (config.inputs.size() != 1) throw UsageError(config.subcommand + " takes exactly one input");
  auto sets = load_inputs(config.inputs.front(), config, err);
  if (sets.size() != 1) throw UsageError(config.subcommand + " takes a single-system input, not a comparison index");
  return std::move(sets.front());
}

// One or two systems, from one or two inputs.
std::vector<ScoredDataset> load_systems(const CliConfig &config, std::ostream &err) {
  std::vector<ScoredDataset> systems;
  if (config.inputs.empty() || config.inputs.size() > 2) throw UsageError("expected one or two inputs");
  for (const auto &path : config.inputs) {
    auto sets = load_inputs(path, config, err);
    for (auto &s : sets) systems.push_back(std::move(s));
  }
  if (systems.size() > 2) throw UsageError("at most two systems can be loaded");
  return systems;
}

template <typename Fn>
int guarded(std::ostream &err, Fn &&fn) {
  try {
    return fn();
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace

std::vector<ScoredDataset> load_inputs(const std::filesystem::path &path, const CliConfig &config, std::ostream &err) {
  const std::string bytes = read_file(path);
  if (looks_like_index(bytes)) {
    auto sections = parse_index(bytes);
    if (config.references) err << "warning: --refs ignored for index input '" << path.string() << "'\n";
    if (!same_thresholds(config.thresholds, FlagThresholds{})) {
      for (auto &scored : sections)
        for (std::size_t i = 0; i < scored.size(); ++i)
          scored.scores[i].flags = compute_flags(scored.dataset.records[i], scored.scores[i], config.thresholds);
    }
    return sections;
  }
  const std::string name = path.stem().string();
  const bool block = config.format == InputFormat::Block ||
                     (config.format == InputFormat::Auto && first_line_is_block_header(bytes));
  Dataset dataset = block ? parse_block_text(bytes, name) : parse_canonical(bytes, name);
  if (config.references) attach_references(dataset, *config.references, err);
  for (const auto &rec : dataset.records)
    for (const auto &w : validate_record(rec)) err << "warning: record '" << rec.id << "': " << w << "\n";
  std::vector<ScoredDataset> out;
  out.push_back(score_dataset(std::move(dataset), config.thresholds, config.threads));
  return out;
}

int cmd_score(const CliConfig &config, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    if (!config.output) throw UsageError("score requires --output");
    const auto scored = load_single(config, err);
    save_index(scored, *config.output);
    print_summary(out, scored);
    out << "index: " << config.output->string() << "\n";
    return kExitOk;
  });
}

int cmd_top(const CliConfig &config, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const auto scored = load_single(config, err);
    const auto order = sort_indices(scored, config.sort);
    const bool refs = scored.has_references();
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"rank", "id", "conf%", "cdp%", "ap_out%", "ap_in%", "overlap%"};
    if (refs) header.push_back("bleu");
    header.insert(header.end(), {"flags", "hypothesis"});
    rows.push_back(header);
    for (std::size_t pos : order) {
      if (rows.size() > config.top_n) break;
      const auto &s = scored.scores[pos];
      if (config.flagged_only && s.flags.empty()) continue;
      const auto &rec = scored.dataset.records[pos];
      std::vector<std::string> row{std::to_string(rows.size()),  rec.id,
                                   pct(to_percent(s.confidence)), pct(to_percent(s.cdp)),
                                   pct(to_percent(s.ap_out)),     pct(to_percent(s.ap_in)),
                                   pct(s.overlap_percent())};
      if (refs) row.push_back(pct(100.0 * *s.bleu));
      row.push_back(flag_list(s));
      row.push_back(truncate_text(rec.hypothesis_text(), 60));
      rows.push_back(std::move(row));
    }
    print_table(out, rows);
    return kExitOk;
  });
}

int cmd_render(const CliConfig &config, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    if (config.record_id.empty()) throw UsageError("render requires --id");
    const auto systems = load_systems(config, err);
    const auto pos = systems.front().find(config.record_id);
    if (!pos) throw Error("no record with id '" + config.record_id + "'");

    std::string document;
    if (systems.size() == 2) {
      if (!config.output) throw UsageError("rendering a comparison requires --output for the SVG file");
      const auto pairs = pair_datasets(systems[0], systems[1]);
      document = render_comparison_svg(pairs[*pos]);
    } else if (config.output) {
      document = render_record_svg(systems[0].dataset.records[*pos], systems[0].scores[*pos]);
    } else {
      RenderOptions options;
      options.max_width = config.width;
      options.color = config.color;
      out << render_matrix_text(systems[0].dataset.records[*pos], options);
      return kExitOk;
    }
    write_file_atomic(*config.output, document);
    out << "wrote " << config.output->string() << "\n";
    return kExitOk;
  });
}

int cmd_serve(const CliConfig &config, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    auto systems = load_systems(config, err);
    const InspectionService service = systems.size() == 2
                                           ? InspectionService(std::move(systems[0]), std::move(systems[1]))
                                           : InspectionService(std::move(systems[0]));
    ServiceHost host(service, {config.host, config.port, config.ui_dir});
    const int port = host.bind();
    if (port < 0) throw Error("cannot bind " + config.host + ":" + std::to_string(config.port));
    out << "serving " << (service.comparison_mode() ? "comparison of " : "") << service.system(0).size()
        << " records on http://" << config.host << ":" << port << "/\n"
        << std::flush;
    if (!host.listen()) throw Error("server stopped unexpectedly");
    return kExitOk;
  });
}

int cmd_compare(const CliConfig &config, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    if (!config.output) throw UsageError("compare requires --output");
    const auto systems = load_systems(config, err);
    if (systems.size() != 2) throw UsageError("compare requires exactly two systems");
    const auto pairs = pair_datasets(systems[0], systems[1]);
    save_index(std::span(systems), *config.output);

    std::size_t a_better = 0, b_better = 0;
    for (const auto &p : pairs) {
      if (p.scores_a.confidence > p.scores_b.confidence) ++a_better;
      if (p.scores_b.confidence > p.scores_a.confidence) ++b_better;
    }
    out << "pairs: " << pairs.size() << "\n";
    for (std::size_t k = 0; k < 2; ++k) {
      const auto &s = systems[k];
      double cdp = 0, ap_out = 0, ap_in = 0, overlap = 0;
      for (const auto &sc : s.scores) {
        cdp += to_percent(sc.cdp);
        ap_out += to_percent(sc.ap_out);
        ap_in += to_percent(sc.ap_in);
        overlap += sc.overlap_percent();
      }
      const double n = static_cast<double>(s.size());
      out << (k == 0 ? "A " : "B ") << s.dataset.system_name << ": confidence " << pct(mean_confidence_percent(s))
          << "% cdp " << pct(cdp / n) << "% ap_out " << pct(ap_out / n) << "% ap_in " << pct(ap_in / n)
          << "% overlap " << pct(overlap / n) << "%\n";
    }
    out << "A outscores B: " << a_better << "\n";
    out << "B outscores A: " << b_better << "\n";
    out << "index: " << config.output->string() << "\n";
    return kExitOk;
  });
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CliConfig config;
  CLI::App app{"Attention-based confidence scoring and inspection for NMT output", "nmtdebug"};
  app.require_subcommand(1);

  std::string format = "auto";
  std::string sort_field = "confidence";
  std::string sort_dir = "asc";
  std::string refs, output;

  const auto add_input = [&](CLI::App *cmd, bool two) {
    auto *opt = cmd->add_option("-i,--input", config.inputs, two ? "Input file(s): alignments or index" : "Input file")
                    ->required()
                    ->check(CLI::ExistingFile);
    opt->expected(1, two ? 2 : 1);
    cmd->add_option("-f,--format", format, "Raw input format")
        ->check(CLI::IsMember({"auto", "canonical", "block"}))
        ->capture_default_str();
    cmd->add_option("-r,--refs", refs, "Reference file, one sentence per line aligned with the records")
        ->check(CLI::ExistingFile);
    cmd->add_option("--threads", config.threads, "Scoring threads (0 = hardware concurrency)");
    cmd->add_option("--low-attention", config.thresholds.low_attention_percent,
                    "LOW_ATTENTION_QUALITY below this percent")
        ->capture_default_str();
    cmd->add_option("--untranslated-overlap", config.thresholds.untranslated_overlap_percent,
                    "POSSIBLE_UNTRANSLATED at or above this overlap percent")
        ->capture_default_str();
    cmd->add_option("--untranslated-min-length", config.thresholds.untranslated_min_length,
                    "POSSIBLE_UNTRANSLATED minimum hypothesis length")
        ->capture_default_str();
    cmd->add_option("--divergent-bleu", config.thresholds.divergent_bleu_points,
                    "REFERENCE_DIVERGENT below this many BLEU points")
        ->capture_default_str();
    cmd->add_option("--divergent-attention", config.thresholds.divergent_attention_percent,
                    "REFERENCE_DIVERGENT requires all attention percents at or above this")
        ->capture_default_str();
  };

  auto *score = app.add_subcommand("score", "Score alignments and write an index file");
  add_input(score, false);
  score->add_option("-o,--output", output, "Index file to write")->required();

  auto *top = app.add_subcommand("top", "Print the top records by a score");
  add_input(top, false);
  top->add_option("-n,--top", config.top_n, "Number of records")->capture_default_str();
  top->add_option("-k,--sort", sort_field, "Sort key")
      ->check(CLI::IsMember({"confidence", "cdp", "ap_in", "ap_out", "overlap", "bleu"}))
      ->capture_default_str();
  top->add_option("-d,--dir", sort_dir, "Sort direction")->check(CLI::IsMember({"asc", "desc"}))->capture_default_str();
  top->add_flag("--flagged-only", config.flagged_only, "Only records with diagnostic flags");

  auto *render = app.add_subcommand("render", "Render one record as a terminal grid or SVG");
  add_input(render, true);
  render->add_option("--id", config.record_id, "Record id")->required();
  render->add_option("-o,--output", output, "SVG file to write (terminal grid when omitted)");
  render->add_option("-w,--width", config.width, "Terminal width")->capture_default_str();
  render->add_flag("--color", config.color, "ANSI colored grid");

  auto *serve = app.add_subcommand("serve", "Serve the inspection API and UI");
  add_input(serve, true);
  serve->add_option("--host", config.host, "Bind address")->capture_default_str();
  serve->add_option("-p,--port", config.port, "Port")->capture_default_str();
  serve->add_option("--ui-dir", config.ui_dir, "Directory with the UI bundle served at /");

  auto *compare = app.add_subcommand("compare", "Pair two systems over the same sources");
  add_input(compare, true);
  compare->add_option("-o,--output", output, "Paired index file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  config.format = format == "canonical" ? InputFormat::Canonical
                  : format == "block"   ? InputFormat::Block
                                        : InputFormat::Auto;
  if (!refs.empty()) config.references = refs;
  if (!output.empty()) config.output = output;
  config.sort = {*parse_sort_field(sort_field), *parse_sort_direction(sort_dir)};

  if (config.subcommand == "score") return cmd_score(config, out, err);
  if (config.subcommand == "top") return cmd_top(config, out, err);
  if (config.subcommand == "render") return cmd_render(config, out, err);
  if (config.subcommand == "serve") return cmd_serve(config, out, err);
  if (config.subcommand == "compare") {
    if (config.inputs.size() != 2) {
      err << "error: compare requires exactly two inputs\n";
      return kExitUsage;
    }
    return cmd_compare(config, out, err);
  }
  return kExitUsage;
}

}  // namespace nmtdebug::cli

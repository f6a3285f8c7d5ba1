#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/bleu.hpp"
#include "nmtdebug/dataset_index.hpp"
#include "nmtdebug/diagnostics.hpp"
#include "nmtdebug/errors.hpp"
#include "nmtdebug/index_file.hpp"
#include "nmtdebug/metrics.hpp"
#include "nmtdebug/render.hpp"
#include "nmtdebug/similarity.hpp"

namespace py = pybind11;
using namespace nmtdebug;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const AttentionMatrix &m) {
  Rows rows(m.rows());
  for (std::size_t j = 0; j < m.rows(); ++j) rows[j].assign(m.row(j).begin(), m.row(j).end());
  return rows;
}

SortKey make_key(const std::string &field, const std::string &direction) {
  const auto f = parse_sort_field(field);
  const auto d = parse_sort_direction(direction);
  if (!f) throw py::value_error("unknown sort key '" + field + "'");
  if (!d) throw py::value_error("direction must be 'asc' or 'desc'");
  return {*f, *d};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attention-based confidence scoring and inspection for NMT output";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<RecordError>(m, "RecordError", base.ptr());
  py::register_exception<IndexVersionError>(m, "IndexVersionError", base.ptr());
  py::register_exception<IndexFormatError>(m, "IndexFormatError", base.ptr());
  py::register_exception<PairingError>(m, "PairingError", base.ptr());
  py::register_exception<SortKeyError>(m, "SortKeyError", base.ptr());

  py::class_<AlignmentRecord>(m, "AlignmentRecord")
      .def_readonly("id", &AlignmentRecord::id)
      .def_readonly("src_tokens", &AlignmentRecord::src_tokens)
      .def_readonly("hyp_tokens", &AlignmentRecord::hyp_tokens)
      .def_readonly("ref_text", &AlignmentRecord::ref_text)
      .def_property_readonly("attention", [](const AlignmentRecord &r) { return to_rows(r.attention); })
      .def_property_readonly("source_text", &AlignmentRecord::source_text)
      .def_property_readonly("hypothesis_text", &AlignmentRecord::hypothesis_text)
      .def("__eq__", [](const AlignmentRecord &a, const AlignmentRecord &b) { return a == b; })
      .def("__repr__", [](const AlignmentRecord &r) { return "<AlignmentRecord id='" + r.id + "'>"; });

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("system_name", &Dataset::system_name)
      .def_readonly("records", &Dataset::records)
      .def("__len__", [](const Dataset &d) { return d.records.size(); })
      .def("__eq__", [](const Dataset &a, const Dataset &b) { return a == b; });

  py::class_<DiagnosticFlag>(m, "DiagnosticFlag")
      .def_property_readonly("kind", [](const DiagnosticFlag &f) { return std::string(flag_name(f.kind)); })
      .def_readonly("value", &DiagnosticFlag::value);

  py::class_<ScoreSet>(m, "ScoreSet")
      .def_readonly("cdp", &ScoreSet::cdp)
      .def_readonly("ap_out", &ScoreSet::ap_out)
      .def_readonly("ap_in", &ScoreSet::ap_in)
      .def_readonly("similarity", &ScoreSet::similarity)
      .def_readonly("op", &ScoreSet::op)
      .def_readonly("confidence", &ScoreSet::confidence)
      .def_readonly("bleu", &ScoreSet::bleu)
      .def_readonly("flags", &ScoreSet::flags)
      .def_property_readonly("overlap_percent", &ScoreSet::overlap_percent)
      .def_property_readonly("flag_names", [](const ScoreSet &s) {
        std::vector<std::string> names;
        for (const auto &f : s.flags) names.emplace_back(flag_name(f.kind));
        return names;
      });

  py::class_<MatchSpan>(m, "MatchSpan")
      .def_readonly("src_begin", &MatchSpan::src_begin)
      .def_readonly("src_end", &MatchSpan::src_end)
      .def_readonly("hyp_begin", &MatchSpan::hyp_begin)
      .def_readonly("hyp_end", &MatchSpan::hyp_end)
      .def_property_readonly("length", &MatchSpan::length);

  py::class_<BleuScore>(m, "BleuScore")
      .def_readonly("value", &BleuScore::value)
      .def_readonly("precisions", &BleuScore::precisions)
      .def_readonly("orders_used", &BleuScore::orders_used)
      .def_readonly("brevity_penalty", &BleuScore::brevity_penalty);

  py::class_<FlagThresholds>(m, "FlagThresholds")
      .def(py::init<>())
      .def_readwrite("low_attention_percent", &FlagThresholds::low_attention_percent)
      .def_readwrite("untranslated_overlap_percent", &FlagThresholds::untranslated_overlap_percent)
      .def_readwrite("untranslated_min_length", &FlagThresholds::untranslated_min_length)
      .def_readwrite("divergent_bleu_points", &FlagThresholds::divergent_bleu_points)
      .def_readwrite("divergent_attention_percent", &FlagThresholds::divergent_attention_percent);

  py::class_<ScoredDataset>(m, "ScoredDataset")
      .def_readonly("dataset", &ScoredDataset::dataset)
      .def_readonly("scores", &ScoredDataset::scores)
      .def_property_readonly("has_references", &ScoredDataset::has_references)
      .def("__len__", &ScoredDataset::size);

  py::class_<ComparisonPair>(m, "ComparisonPair")
      .def_readonly("source_id", &ComparisonPair::source_id)
      .def_readonly("record_a", &ComparisonPair::record_a)
      .def_readonly("record_b", &ComparisonPair::record_b)
      .def_readonly("scores_a", &ComparisonPair::scores_a)
      .def_readonly("scores_b", &ComparisonPair::scores_b);

  m.def(
      "make_record",
      [](std::string id, std::vector<std::string> src, std::vector<std::string> hyp, const Rows &attention,
         std::optional<std::string> ref) {
        AttentionMatrix matrix;
        try {
          matrix = AttentionMatrix::from_rows(attention);
        } catch (const std::invalid_argument &e) {
          throw RecordError(id, e.what());
        }
        return make_record(std::move(id), std::move(src), std::move(hyp), std::move(matrix), std::move(ref));
      },
      py::arg("id"), py::arg("src_tokens"), py::arg("hyp_tokens"), py::arg("attention"),
      py::arg("ref_text") = std::nullopt);
  m.def("make_dataset", [](std::string name, std::vector<AlignmentRecord> records) {
    return Dataset{std::move(name), std::move(records)};
  });

  m.def("parse_canonical", py::overload_cast<std::string_view, std::string>(&parse_canonical), py::arg("text"),
        py::arg("system_name") = "");
  m.def("parse_block_text", py::overload_cast<std::string_view, std::string>(&parse_block_text), py::arg("text"),
        py::arg("system_name") = "");
  m.def("serialize_canonical", &serialize_canonical);
  m.def("serialize_block_text", &serialize_block_text);
  m.def("validate_record", &validate_record);

  const auto matrix_fn = [](double (*fn)(const AttentionMatrix &)) {
    return [fn](const Rows &rows) { return fn(AttentionMatrix::from_rows(rows)); };
  };
  m.def("coverage_deviation_penalty", matrix_fn(&coverage_deviation_penalty));
  m.def("absentmindedness_out", matrix_fn(&absentmindedness_out));
  m.def("absentmindedness_in", matrix_fn(&absentmindedness_in));
  m.def("similarity", &similarity);
  m.def("longest_match_span", &longest_match_span);
  m.def("overlap_penalty", &overlap_penalty, py::arg("hyp_length"), py::arg("similarity"));
  m.def("confidence", &confidence);
  m.def("to_percent", &to_percent);
  m.def("score_record", &score_record, py::arg("record"), py::arg("thresholds") = FlagThresholds{});
  m.def("sentence_bleu", [](const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
    return sentence_bleu(hyp, ref);
  });
  m.def("compute_flags", py::overload_cast<const AlignmentRecord &, const ScoreSet &, const FlagThresholds &>(&compute_flags),
        py::arg("record"), py::arg("scores"), py::arg("thresholds") = FlagThresholds{});

  m.def("score_dataset", &score_dataset, py::arg("dataset"), py::arg("thresholds") = FlagThresholds{},
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "sort_indices",
      [](const ScoredDataset &scored, const std::string &key, const std::string &direction) {
        return sort_indices(scored, make_key(key, direction));
      },
      py::arg("scored"), py::arg("key") = "confidence", py::arg("direction") = "asc");
  m.def("pair_datasets", &pair_datasets);

  m.def("serialize_index", py::overload_cast<const ScoredDataset &>(&serialize_index));
  m.def("parse_index", &parse_index);
  m.def("save_index", py::overload_cast<const ScoredDataset &, const std::filesystem::path &>(&save_index));
  m.def("load_index", &load_index);

  m.def(
      "render_matrix_text",
      [](const AlignmentRecord &record, std::size_t max_width, bool color) {
        RenderOptions options;
        options.max_width = max_width;
        options.color = color;
        return render_matrix_text(record, options);
      },
      py::arg("record"), py::arg("max_width") = 120, py::arg("color") = false);
  m.def("render_record_svg", &render_record_svg);
  m.def("render_comparison_svg", &render_comparison_svg);
}

#include "nmtdebug/service.hpp"

#include <charconv>

#include "json.hpp"
#include "nmtdebug/errors.hpp"
#include "nmtdebug/index_file.hpp"
#include "nmtdebug/metrics.hpp"
#include "nmtdebug/similarity.hpp"
#include "nmtdebug/text.hpp"

namespace nmtdebug {

using json = nlohmann::json;

namespace {

constexpr std::size_t kSnippetLength = 120;

HttpResponse json_response(int status, const json &body) { return {status, "application/json; charset=utf-8", body.dump()}; }

HttpResponse error_response(int status, std::string_view code, const std::string &message) {
  return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

std::string snippet(const std::string &text) {
  const auto cps = decode_utf8(text);
  if (cps.size() <= kSnippetLength) return text;
  return encode_utf8(std::u32string_view(cps).substr(0, kSnippetLength - 1)) + "…";
}

json flags_json(const ScoreSet &s) {
  json out = json::array();
  for (const auto &f : s.flags) out.push_back({{"kind", flag_name(f.kind)}, {"value", f.value}});
  return out;
}

json percents_json(const ScoreSet &s) {
  json p = {{"confidence", to_percent(s.confidence)},
            {"cdp", to_percent(s.cdp)},
            {"ap_out", to_percent(s.ap_out)},
            {"ap_in", to_percent(s.ap_in)},
            {"overlap", s.overlap_percent()}};
  if (s.bleu) p["bleu"] = 100.0 * *s.bleu;
  return p;
}

json summary_json(const ScoredDataset &scored, std::size_t pos) {
  const auto &rec = scored.dataset.records[pos];
  const auto &s = scored.scores[pos];
  json names = json::array();
  for (const auto &f : s.flags) names.push_back(flag_name(f.kind));
  return {{"position", pos},
          {"id", rec.id},
          {"source", snippet(rec.source_text())},
          {"hypothesis", snippet(rec.hypothesis_text())},
          {"hyp_length", rec.hypothesis_length()},
          {"has_reference", rec.ref_text.has_value()},
          {"scores", percents_json(s)},
          {"flags", names}};
}

json detail_json(const ScoredDataset &scored, std::size_t pos) {
  const auto &rec = scored.dataset.records[pos];
  const auto &s = scored.scores[pos];
  json attention = json::array();
  for (std::size_t j = 0; j < rec.attention.rows(); ++j) {
    const auto row = rec.attention.row(j);
    attention.push_back(json(std::vector<double>(row.begin(), row.end())));
  }
  json scores = {{"cdp", s.cdp},
                 {"ap_out", s.ap_out},
                 {"ap_in", s.ap_in},
                 {"similarity", s.similarity},
                 {"op", s.op ? json(*s.op) : json(nullptr)},
                 {"confidence", s.confidence},
                 {"overlap_percent", s.overlap_percent()},
                 {"bleu", s.bleu ? json(*s.bleu) : json(nullptr)},
                 {"percent", percents_json(s)},
                 {"flags", flags_json(s)}};
  json out = {{"id", rec.id},
              {"position", pos},
              {"system", scored.dataset.system_name},
              {"src_tokens", rec.src_tokens},
              {"hyp_tokens", rec.hyp_tokens},
              {"attention", attention},
              {"scores", scores},
              {"warnings", validate_record(rec)}};
  if (rec.ref_text) out["ref_text"] = *rec.ref_text;
  if (s.overlap_percent() > kUnderlineOverlapPercent) {
    const auto src = rec.source_text();
    const auto hyp = rec.hypothesis_text();
    const auto span = longest_match_span(src, hyp);
    const auto hyp_cps = decode_utf8(hyp);
    out["match"] = {{"src", {span.src_begin, span.src_end}},
                    {"hyp", {span.hyp_begin, span.hyp_end}},
                    {"length", span.length()},
                    {"text", encode_utf8(std::u32string_view(hyp_cps).substr(span.hyp_begin, span.length()))}};
  }
  return out;
}

bool parse_size(std::string_view text, std::size_t &out) {
  if (text.empty()) return false;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size();
}

std::string_view param(const QueryParams &params, std::string_view name, std::string_view fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : std::string_view(it->second);
}

}  // namespace

InspectionService::InspectionService(ScoredDataset scored) {
  systems_.push_back(std::move(scored));
  for (auto field : kAllSortFields)
    for (auto dir : {SortDirection::Ascending, SortDirection::Descending})
      if (field != SortField::Bleu || systems_[0].has_references())
        orders_[{0, field, dir}] = sort_indices(systems_[0], {field, dir});
}

InspectionService::InspectionService(ScoredDataset a, ScoredDataset b) {
  pair_datasets(a, b);
  systems_.push_back(std::move(a));
  systems_.push_back(std::move(b));
  for (std::size_t k = 0; k < systems_.size(); ++k)
    for (auto field : kAllSortFields)
      for (auto dir : {SortDirection::Ascending, SortDirection::Descending})
        if (field != SortField::Bleu || systems_[k].has_references())
          orders_[{k, field, dir}] = sort_indices(systems_[k], {field, dir});
}

const std::vector<std::size_t> *InspectionService::cached_order(std::size_t system, SortKey key) const {
  const auto it = orders_.find({system, key.field, key.direction});
  return it == orders_.end() ? nullptr : &it->second;
}

HttpResponse InspectionService::meta() const {
  json systems = json::array();
  json sort_keys = json::array();
  bool has_refs = true;
  for (const auto &s : systems_) {
    systems.push_back(s.dataset.system_name);
    has_refs = has_refs && s.has_references();
  }
  for (auto field : kAllSortFields)
    if (field != SortField::Bleu || has_refs) sort_keys.push_back(sort_field_name(field));
  return json_response(200, {{"count", systems_.front().size()},
                             {"systems", systems},
                             {"has_references", has_refs},
                             {"bleu_sort_available", has_refs},
                             {"comparison", comparison_mode()},
                             {"sort_keys", sort_keys},
                             {"format_version", kIndexFormatVersion},
                             {"api_version", kApiVersion}});
}

HttpResponse InspectionService::records(const QueryParams &params) const {
  std::size_t offset = 0;
  std::size_t limit = kDefaultPageLimit;
  if (!parse_size(param(params, "offset", "0"), offset))
    return error_response(400, "invalid_parameter", "offset must be a non-negative integer");
  if (!parse_size(param(params, "limit", std::to_string(kDefaultPageLimit)), limit) || limit < 1 ||
      limit > kMaxPageLimit)
    return error_response(400, "invalid_parameter", "limit must be an integer in [1, 500]");
  const auto field = parse_sort_field(param(params, "sort", "confidence"));
  if (!field) return error_response(400, "invalid_parameter", "unknown sort key");
  const auto dir = parse_sort_direction(param(params, "dir", "asc"));
  if (!dir) return error_response(400, "invalid_parameter", "dir must be asc or desc");
  const auto system_name = param(params, "system", "a");
  if (system_name != "a" && system_name != "b")
    return error_response(400, "invalid_parameter", "system must be a or b");
  const std::size_t system = system_name == "b" ? 1 : 0;
  if (system >= systems_.size()) return error_response(409, "not_comparison_mode", "only one system is loaded");

  const auto *order = cached_order(system, {*field, *dir});
  if (!order) return error_response(400, "bleu_unavailable", "bleu sort requires a reference for every record");

  const auto &scored = systems_[system];
  const std::size_t begin = std::min(offset, order->size());
  const std::size_t end = std::min(order->size(), begin + limit);
  json page = json::array();
  for (std::size_t k = begin; k < end; ++k) page.push_back(summary_json(scored, (*order)[k]));
  return json_response(200, {{"total", scored.size()},
                             {"offset", offset},
                             {"limit", limit},
                             {"sort", sort_field_name(*field)},
                             {"dir", sort_direction_name(*dir)},
                             {"system", system_name},
                             {"records", page}});
}

HttpResponse InspectionService::record(std::string_view id, const QueryParams &params) const {
  const auto system_name = param(params, "system", "a");
  if (system_name != "a" && system_name != "b")
    return error_response(400, "invalid_parameter", "system must be a or b");
  const std::size_t system = system_name == "b" ? 1 : 0;
  if (system >= systems_.size()) return error_response(409, "not_comparison_mode", "only one system is loaded");
  const auto pos = systems_[system].find(id);
  if (!pos) return error_response(404, "not_found", "no record with id '" + std::string(id) + "'");
  return json_response(200, detail_json(systems_[system], *pos));
}

HttpResponse InspectionService::compare(std::string_view id) const {
  if (!comparison_mode()) return error_response(409, "not_comparison_mode", "service runs on a single dataset");
  const auto pos = systems_[0].find(id);
  if (!pos) return error_response(404, "not_found", "no pair with id '" + std::string(id) + "'");
  return json_response(200, {{"id", std::string(id)},
                             {"position", *pos},
                             {"a", detail_json(systems_[0], *pos)},
                             {"b", detail_json(systems_[1], *pos)}});
}

HttpResponse InspectionService::handle(std::string_view path, const QueryParams &params) const {
  constexpr std::string_view kRecord = "/api/record/";
  constexpr std::string_view kCompare = "/api/compare/";
  if (path == "/api/meta") return meta();
  if (path == "/api/records") return records(params);
  if (path.starts_with(kRecord) && path.size() > kRecord.size()) return record(path.substr(kRecord.size()), params);
  if (path.starts_with(kCompare) && path.size() > kCompare.size()) return compare(path.substr(kCompare.size()));
  return error_response(404, "not_found", "no such endpoint");
}

}  // namespace nmtdebug

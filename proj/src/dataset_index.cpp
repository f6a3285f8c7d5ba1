#include "nmtdebug/dataset_index.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "nmtdebug/errors.hpp"
#include "nmtdebug/metrics.hpp"

namespace nmtdebug {

bool ScoredDataset::has_references() const {
  return std::all_of(scores.begin(), scores.end(), [](const ScoreSet &s) { return s.bleu.has_value(); });
}

std::optional<std::size_t> ScoredDataset::find(std::string_view id) const {
  const auto &records = dataset.records;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].id == id) return i;
  return std::nullopt;
}

ScoredDataset score_dataset(Dataset dataset, const FlagThresholds &thresholds, unsigned threads) {
  ScoredDataset scored;
  scored.scores.resize(dataset.records.size());
  const auto &records = dataset.records;

  constexpr std::size_t kMinPerWorker = 256;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::clamp<std::size_t>(records.size() / kMinPerWorker, 1, static_cast<std::size_t>(threads));

  const auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        scored.scores[i] = score_record(records[i], thresholds);
      } catch (const RecordError &) {
        throw;
      } catch (const std::exception &e) {
        throw RecordError(records[i].id, e.what());
      }
    }
  };

  if (workers == 1) {
    score_range(0, records.size());
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    const std::size_t chunk = (records.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(records.size(), w * chunk);
      const std::size_t end = std::min(records.size(), begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          score_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto &err : errors)
      if (err) std::rethrow_exception(err);
  }
  scored.dataset = std::move(dataset);
  return scored;
}

std::string_view sort_field_name(SortField field) {
  switch (field) {
    case SortField::Confidence:
      return "confidence";
    case SortField::Cdp:
      return "cdp";
    case SortField::ApIn:
      return "ap_in";
    case SortField::ApOut:
      return "ap_out";
    case SortField::Overlap:
      return "overlap";
    case SortField::Bleu:
      return "bleu";
  }
  return "confidence";
}

std::optional<SortField> parse_sort_field(std::string_view name) {
  for (auto field : kAllSortFields)
    if (sort_field_name(field) == name) return field;
  return std::nullopt;
}

std::string_view sort_direction_name(SortDirection direction) {
  return direction == SortDirection::Ascending ? "asc" : "desc";
}

std::optional<SortDirection> parse_sort_direction(std::string_view name) {
  if (name == "asc") return SortDirection::Ascending;
  if (name == "desc") return SortDirection::Descending;
  return std::nullopt;
}

namespace {

double sort_value(const ScoreSet &s, SortField field) {
  switch (field) {
    case SortField::Confidence:
      return s.confidence;
    case SortField::Cdp:
      return s.cdp;
    case SortField::ApIn:
      return s.ap_in;
    case SortField::ApOut:
      return s.ap_out;
    case SortField::Overlap:
      return s.similarity;
    case SortField::Bleu:
      return *s.bleu;
  }
  return s.confidence;
}

}  // namespace

std::vector<std::size_t> sort_indices(const ScoredDataset &scored, SortKey key) {
  if (key.field == SortField::Bleu && !scored.has_references())
    throw SortKeyError("cannot sort by bleu: not every record has a reference");
  std::vector<double> values(scored.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = sort_value(scored.scores[i], key.field);

  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (key.direction == SortDirection::Ascending) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
  }
  return order;
}

std::vector<ComparisonPair> pair_datasets(const ScoredDataset &a, const ScoredDataset &b) {
  if (a.size() != b.size())
    throw PairingError(std::min(a.size(), b.size()), "datasets differ in length (" + std::to_string(a.size()) +
                                                         " vs " + std::to_string(b.size()) + " records)");
  std::vector<ComparisonPair> pairs;
  pairs.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto &ra = a.dataset.records[k];
    const auto &rb = b.dataset.records[k];
    if (ra.src_tokens != rb.src_tokens)
      throw PairingError(k, "source sentences differ: '" + ra.source_text() + "' vs '" + rb.source_text() + "'");
    pairs.push_back({ra.id, ra, rb, a.scores[k], b.scores[k]});
  }
  return pairs;
}

}  // namespace nmtdebug

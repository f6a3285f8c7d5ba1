#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmtdebug/alignment.hpp"
#include "nmtdebug/diagnostics.hpp"
#include "nmtdebug/scores.hpp"

namespace nmtdebug {

struct ScoredDataset {
  Dataset dataset;
  std::vector<ScoreSet> scores;  // scores[i] belongs to dataset.records[i]

  std::size_t size() const { return scores.size(); }
  bool has_references() const;
  /// Position of the record with `id`, if any.
  std::optional<std::size_t> find(std::string_view id) const;

  bool operator==(const ScoredDataset &) const = default;
};

/// Scores every record; records are independent, so large datasets are
/// split across `threads` workers (0 picks the hardware concurrency).
ScoredDataset score_dataset(Dataset dataset, const FlagThresholds &thresholds = {}, unsigned threads = 0);

enum class SortField { Confidence, Cdp, ApIn, ApOut, Overlap, Bleu };
enum class SortDirection { Ascending, Descending };

struct SortKey {
  SortField field = SortField::Confidence;
  SortDirection direction = SortDirection::Ascending;

  bool operator==(const SortKey &) const = default;
};

std::string_view sort_field_name(SortField field);
std::optional<SortField> parse_sort_field(std::string_view name);
std::string_view sort_direction_name(SortDirection direction);
std::optional<SortDirection> parse_sort_direction(std::string_view name);
inline constexpr SortField kAllSortFields[] = {SortField::Confidence, SortField::Cdp,     SortField::ApIn,
                                               SortField::ApOut,      SortField::Overlap, SortField::Bleu};

/// Permutation of record positions ordered by `key`; ties keep position
/// order in both directions. Throws SortKeyError for a BLEU key when any
/// record lacks a reference.
std::vector<std::size_t> sort_indices(const ScoredDataset &scored, SortKey key);

struct ComparisonPair {
  std::string source_id;
  AlignmentRecord record_a;
  AlignmentRecord record_b;
  ScoreSet scores_a;
  ScoreSet scores_b;
};

/// Positional pairing of two systems' outputs for the same sources. Throws
/// PairingError on a length mismatch or the first position whose source
/// tokens differ.
std::vector<ComparisonPair> pair_datasets(const ScoredDataset &a, const ScoredDataset &b);

}  // namespace nmtdebug

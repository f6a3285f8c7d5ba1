#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmtdebug/dataset_index.hpp"

namespace nmtdebug {

// Index file, one section per scored dataset (a comparison index holds two):
//
//   #nmtdebug-index<TAB>v1<TAB><system name><TAB><record count>
//   <id><TAB><src><TAB><hyp><TAB><matrix><TAB><reference or empty><TAB><scores>
//   ...
//
// <scores> is "cdp=.. ap_out=.. ap_in=.. sim=.. op=.. conf=.. bleu=.. flags=.."
// in that order; absent values are written as "-", flags as
// NAME:value pairs joined by ",". Every line ends in "\n".
inline constexpr std::string_view kIndexMagic = "#nmtdebug-index";
inline constexpr std::string_view kIndexFormatVersion = "v1";

std::string serialize_index(std::span<const ScoredDataset> sections);
std::string serialize_index(const ScoredDataset &scored);

/// Throws IndexVersionError or IndexFormatError (with byte offset).
std::vector<ScoredDataset> parse_index(std::string_view bytes);
bool looks_like_index(std::string_view bytes);

void save_index(const ScoredDataset &scored, const std::filesystem::path &path);
void save_index(std::span<const ScoredDataset> sections, const std::filesystem::path &path);
/// Loads a single-section index; throws IndexFormatError otherwise.
ScoredDataset load_index(const std::filesystem::path &path);
std::vector<ScoredDataset> load_index_sections(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

}  // namespace nmtdebug

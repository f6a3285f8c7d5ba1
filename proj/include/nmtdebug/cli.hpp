#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nmtdebug/dataset_index.hpp"
#include "nmtdebug/diagnostics.hpp"

namespace nmtdebug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;

enum class InputFormat { Auto, Canonical, Block };

struct CliConfig {
  std::string subcommand;
  std::vector<std::filesystem::path> inputs;
  InputFormat format = InputFormat::Auto;
  std::optional<std::filesystem::path> references;
  std::optional<std::filesystem::path> output;
  SortKey sort;
  std::size_t top_n = 10;
  bool flagged_only = false;
  std::string record_id;
  std::size_t width = 120;
  bool color = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path ui_dir;
  FlagThresholds thresholds;
  unsigned threads = 0;
};

/// Loads raw alignments (canonical or block text) or an index file. Raw
/// inputs are scored; an aligned reference file fills in missing references.
/// Returns one dataset, or two for a comparison index.
std::vector<ScoredDataset> load_inputs(const std::filesystem::path &path, const CliConfig &config, std::ostream &err);

int cmd_score(const CliConfig &config, std::ostream &out, std::ostream &err);
int cmd_top(const CliConfig &config, std::ostream &out, std::ostream &err);
int cmd_render(const CliConfig &config, std::ostream &out, std::ostream &err);
int cmd_serve(const CliConfig &config, std::ostream &out, std::ostream &err);
int cmd_compare(const CliConfig &config, std::ostream &out, std::ostream &err);

/// Parses arguments and dispatches; returns the process exit status.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace nmtdebug::cli

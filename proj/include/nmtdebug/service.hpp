#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "nmtdebug/dataset_index.hpp"

namespace nmtdebug {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json; charset=utf-8";
  std::string body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

inline constexpr std::size_t kMaxPageLimit = 500;
inline constexpr std::size_t kDefaultPageLimit = 50;
/// Detail responses carry the longest match only above this overlap percent.
inline constexpr double kUnderlineOverlapPercent = 10.0;
inline constexpr std::string_view kApiVersion = "1";

/// Read-only JSON API over one scored dataset, or two paired datasets in
/// comparison mode. Immutable after construction; every handler is const and
/// safe to call concurrently.
class InspectionService {
 public:
  explicit InspectionService(ScoredDataset scored);
  /// Comparison mode. Throws PairingError when the sources do not match.
  InspectionService(ScoredDataset a, ScoredDataset b);

  bool comparison_mode() const { return systems_.size() == 2; }
  const ScoredDataset &system(std::size_t k) const { return systems_.at(k); }

  HttpResponse meta() const;
  HttpResponse records(const QueryParams &params) const;
  HttpResponse record(std::string_view id, const QueryParams &params) const;
  HttpResponse compare(std::string_view id) const;

  /// Routes a GET request for one of the /api endpoints.
  HttpResponse handle(std::string_view path, const QueryParams &params) const;

 private:
  const std::vector<std::size_t> *cached_order(std::size_t system, SortKey key) const;

  std::vector<ScoredDataset> systems_;
  std::map<std::tuple<std::size_t, SortField, SortDirection>, std::vector<std::size_t>> orders_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::filesystem::path ui_dir;  // served at "/" when set
};

/// HTTP front end for an InspectionService.
class ServiceHost {
 public:
  ServiceHost(const InspectionService &service, ServerOptions options);
  ~ServiceHost();
  ServiceHost(const ServiceHost &) = delete;
  ServiceHost &operator=(const ServiceHost &) = delete;

  /// Binds the listening socket; returns the bound port or -1 on failure
  /// (for example when the port is in use).
  int bind();
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nmtdebug

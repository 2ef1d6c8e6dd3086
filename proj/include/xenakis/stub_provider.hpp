#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "xenakis/geo.hpp"

namespace httplib {
class Server;
}

namespace xenakis {

/// Minimal Overpass-style endpoint for tests and offline demos. It serves the
/// features of its fixture documents whose extent intersects the requested
/// box. The box is read from the first "(south,west,north,east)" group of the
/// `data` parameter, as in an Overpass QL bbox filter.
class StubProvider {
 public:
  static constexpr const char* kPath = "/api/interpreter";

  /// Throws MalformedDocument if a fixture is not a FeatureCollection.
  explicit StubProvider(const std::vector<std::string>& geojson_documents);
  /// Reads fixture files for the constructor.
  static std::vector<std::string> load_files(const std::vector<std::string>& paths);
  ~StubProvider();

  StubProvider(const StubProvider&) = delete;
  StubProvider& operator=(const StubProvider&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  /// Blocks serving on the calling thread.
  bool listen(const std::string& host, int port);

  std::string url() const;
  std::uint64_t request_count() const noexcept { return requests_.load(); }

  /// Next request answers with this status and body instead of data.
  void fail_next(int status, std::string body,
                 std::optional<long> retry_after = std::nullopt);

  /// GeoJSON FeatureCollection for a box, as the server would send it.
  std::string respond(const BoundingBox& bbox) const;

 private:
  struct Feature;
  struct Failure {
    int status;
    std::string body;
    std::optional<long> retry_after;
  };

  void install_routes();

  std::vector<std::shared_ptr<const Feature>> features_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
  std::atomic<std::uint64_t> requests_{0};
  std::mutex failure_mutex_;
  std::optional<Failure> failure_;
};

/// Parses "(s,w,n,e)" out of an Overpass query.
std::optional<BoundingBox> bbox_from_overpass_query(const std::string& query);

}  // namespace xenakis

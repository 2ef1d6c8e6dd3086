#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "xenakis/ingest/provider.hpp"
#include "xenakis/service/loop_store.hpp"

namespace httplib {
class Server;
}

namespace xenakis::service {

inline constexpr std::size_t kDefaultLoopCapacity = 128;
inline constexpr std::size_t kDefaultMaxInlineBytes = 20u * 1024u * 1024u;

struct ServiceConfig {
  ingest::ProviderConfig provider;
  std::filesystem::path cache_dir;
  std::chrono::seconds cache_ttl = ingest::kDefaultCacheTtl;
  std::size_t loop_capacity = kDefaultLoopCapacity;
  std::size_t max_inline_bytes = kDefaultMaxInlineBytes;
  /// Origins allowed by CORS; "*" allows any.
  std::vector<std::string> cors_origins{"*"};
  std::chrono::milliseconds probe_timeout{500};

  /// Reads XENAKIS_PROVIDER_URL, XENAKIS_CACHE_DIR, XENAKIS_LOOP_CAPACITY.
  static ServiceConfig from_env();
};

/// HTTP front end over the pipeline:
///
///   GET  /v1/histogram?min_lon&min_lat&max_lon&max_lat[&bins]
///   POST /v1/sonify            RegionQuery JSON or a GeoJSON document
///   GET  /v1/loop/{id}.wav
///   GET  /healthz
///
/// Errors are JSON bodies {"error": {"code", "message"}}.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds (0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Serves on the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

  /// Number of loops synthesized since start; repeat requests served from
  /// the loop store do not count.
  std::uint64_t render_count() const noexcept { return renders_.load(); }
  LoopStore& loops() noexcept { return loops_; }
  ingest::DiskCache& region_cache() noexcept { return cache_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Handlers;

  void install_routes();

  ServiceConfig config_;
  ingest::DiskCache cache_;
  LoopStore loops_;
  std::atomic<std::uint64_t> renders_{0};
  std::mutex render_mutex_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace xenakis::service

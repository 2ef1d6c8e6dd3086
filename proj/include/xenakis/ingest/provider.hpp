#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "xenakis/geo.hpp"

namespace xenakis::ingest {

inline constexpr const char* kDefaultEndpoint =
    "https://overpass-api.de/api/interpreter";
/// `{{bbox}}` is replaced with "south,west,north,east".
inline constexpr const char* kDefaultQueryTemplate =
    "[out:json][timeout:25];way[\"highway\"]({{bbox}});out geom;";
inline constexpr std::chrono::seconds kDefaultCacheTtl{7 * 24 * 3600};

struct ProviderConfig {
  std::string endpoint = kDefaultEndpoint;
  std::string query_template = kDefaultQueryTemplate;
  std::chrono::milliseconds timeout{30000};

  /// Endpoint from XENAKIS_PROVIDER_URL when set, defaults otherwise.
  static ProviderConfig from_env();
};

std::string expand_query(const std::string& query_template,
                         const BoundingBox& bbox);

/// Converts an Overpass `out geom` JSON response into a GeoJSON
/// FeatureCollection of LineStrings. Documents that are already GeoJSON are
/// returned unchanged. Throws ProviderError if the body is neither.
std::string normalize_provider_body(const std::string& body);

/// Sidecar record stored next to each cached document, one key=value per
/// line.
struct CacheMetadata {
  std::int64_t fetched_at = 0;  // unix seconds
  std::string endpoint;
  std::string bbox;  // BoundingBox::to_string of the rounded box
  std::size_t bytes = 0;
  std::string sha256;

  std::string serialize() const;
  /// Throws Error(CacheCorrupt) on missing or unparseable fields.
  static CacheMetadata parse(const std::string& text);
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t stores = 0;
  std::uint64_t corrupt_dropped = 0;
};

/// One `<key>.geojson` plus `<key>.meta` pair per cached region. Keys are
/// SHA-256 over the rounded bbox, endpoint and query template, so equal boxes
/// map to the same file regardless of float formatting. Writes to one key are
/// serialized; readers of a key share its lock.
class DiskCache {
 public:
  using Clock = std::function<std::int64_t()>;

  explicit DiskCache(std::filesystem::path dir,
                     std::chrono::seconds ttl = kDefaultCacheTtl,
                     Clock now = {});

  /// $XENAKIS_CACHE_DIR, else $XDG_CACHE_HOME/xenakis, else ~/.cache/xenakis.
  static std::filesystem::path default_dir();

  std::string key_for(const BoundingBox& bbox, const std::string& endpoint,
                      const std::string& query_template) const;
  std::filesystem::path data_path(const std::string& key) const;
  std::filesystem::path meta_path(const std::string& key) const;

  /// Fresh entry bytes, or nullopt on a miss or expired entry. Throws
  /// Error(CacheCorrupt) if the entry exists but fails validation.
  std::optional<std::string> load(const std::string& key);
  void store(const std::string& key, const std::string& bytes,
             const std::string& endpoint, const BoundingBox& bbox);
  void drop(const std::string& key);

  std::shared_mutex& lock_for(const std::string& key);

  std::size_t entry_count() const;
  CacheStats stats() const;
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::int64_t now() const;

 private:
  friend std::string fetch_region(const BoundingBox&, const ProviderConfig&,
                                  DiskCache&);

  std::filesystem::path dir_;
  std::chrono::seconds ttl_;
  Clock now_;
  std::mutex locks_mutex_;
  std::unordered_map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
  std::atomic<std::uint64_t> hits_{0}, misses_{0}, stores_{0}, corrupt_{0};
};

/// Fetches street GeoJSON for a box through the disk cache. At most two
/// requests per endpoint are in flight process-wide; after a 429 further
/// requests to that endpoint fail fast with RateLimited until Retry-After
/// has elapsed.
///
/// Errors: Error(InvalidBoundingBox) before any I/O, NetworkError,
/// ProviderError, RateLimited. A corrupt cache entry is dropped and fetched
/// again once.
std::string fetch_region(const BoundingBox& bbox,
                         const ProviderConfig& provider, DiskCache& cache);

/// Number of HTTP requests fetch_region has issued in this process.
std::uint64_t provider_request_count();

/// True when the endpoint accepts a TCP connection and answers HTTP.
bool provider_reachable(const ProviderConfig& provider,
                        std::chrono::milliseconds timeout);

}  // namespace xenakis::ingest

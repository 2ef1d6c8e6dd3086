#include "xenakis/ingest/provider.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <semaphore>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "xenakis/error.hpp"
#include "xenakis/hash.hpp"

namespace xenakis::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

ProviderConfig ProviderConfig::from_env() {
  ProviderConfig c;
  if (const char* url = std::getenv("XENAKIS_PROVIDER_URL"); url && *url) c.endpoint = url;
  return c;
}

std::string expand_query(const std::string& query_template, const BoundingBox& bbox) {
  static constexpr std::string_view kToken = "{{bbox}}";
  std::string out = query_template;
  const std::string box = bbox.overpass_order();
  for (auto pos = out.find(kToken); pos != std::string::npos;
       pos = out.find(kToken, pos + box.size()))
    out.replace(pos, kToken.size(), box);
  return out;
}

std::string normalize_provider_body(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw ProviderError(200, body.substr(0, 512));
  }
  if (doc.is_object() && doc.contains("type")) return body;
  if (!doc.is_object() || !doc.contains("elements") || !doc["elements"].is_array())
    throw ProviderError(200, body.substr(0, 512));

  if (auto remark = doc.find("remark");
      remark != doc.end() && remark->is_string() &&
      remark->get<std::string>().find("error") != std::string::npos)
    throw ProviderError(200, remark->get<std::string>());

  json features = json::array();
  for (const auto& el : doc["elements"]) {
    if (el.value("type", "") != "way" || !el.contains("geometry")) continue;
    // Overpass leaves nulls for nodes it could not resolve; split there.
    json parts = json::array();
    json current = json::array();
    for (const auto& node : el["geometry"]) {
      if (node.is_object() && node.contains("lat") && node.contains("lon")) {
        current.push_back({node["lon"], node["lat"]});
      } else if (!current.empty()) {
        parts.push_back(std::move(current));
        current = json::array();
      }
    }
    if (!current.empty()) parts.push_back(std::move(current));
    json lines = json::array();
    for (auto& p : parts)
      if (p.size() >= 2) lines.push_back(std::move(p));
    if (lines.empty()) continue;

    json geometry = lines.size() == 1
                        ? json{{"type", "LineString"}, {"coordinates", lines[0]}}
                        : json{{"type", "MultiLineString"}, {"coordinates", lines}};
    const std::string id =
        "way/" + (el.contains("id") ? el["id"].dump() : std::to_string(features.size()));
    features.push_back({{"type", "Feature"},
                        {"id", id},
                        {"properties", el.value("tags", json::object())},
                        {"geometry", std::move(geometry)}});
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump();
}

std::string CacheMetadata::serialize() const {
  std::ostringstream out;
  out << "# xenakis region cache entry\n"
      << "version=1\n"
      << "fetched_at=" << fetched_at << "\n"
      << "endpoint=" << endpoint << "\n"
      << "bbox=" << bbox << "\n"
      << "bytes=" << bytes << "\n"
      << "sha256=" << sha256 << "\n";
  return out.str();
}

CacheMetadata CacheMetadata::parse(const std::string& text) {
  std::map<std::string, std::string> fields;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::CacheCorrupt, "cache metadata line without '='");
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end())
      throw Error(ErrorCode::CacheCorrupt, std::string("cache metadata lacks ") + key);
    return it->second;
  };
  if (need("version") != "1")
    throw Error(ErrorCode::CacheCorrupt, "unknown cache metadata version");
  CacheMetadata m;
  try {
    m.fetched_at = std::stoll(need("fetched_at"));
    m.bytes = static_cast<std::size_t>(std::stoull(need("bytes")));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::CacheCorrupt, "cache metadata has a non-numeric field");
  }
  m.endpoint = need("endpoint");
  m.bbox = need("bbox");
  m.sha256 = need("sha256");
  return m;
}

DiskCache::DiskCache(fs::path dir, std::chrono::seconds ttl, Clock now)
    : dir_(std::move(dir)), ttl_(ttl), now_(std::move(now)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create cache dir " + dir_.string());
}

fs::path DiskCache::default_dir() {
  if (const char* d = std::getenv("XENAKIS_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "xenakis";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "xenakis";
  return fs::temp_directory_path() / "xenakis";
}

std::int64_t DiskCache::now() const {
  if (now_) return now_();
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string DiskCache::key_for(const BoundingBox& bbox, const std::string& endpoint,
                               const std::string& query_template) const {
  return sha256_hex("xenakis-region-v1\n" + bbox.rounded().to_string() + "\n" +
                    endpoint + "\n" + query_template);
}

fs::path DiskCache::data_path(const std::string& key) const {
  return dir_ / (key + ".geojson");
}

fs::path DiskCache::meta_path(const std::string& key) const {
  return dir_ / (key + ".meta");
}

namespace {

std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_atomically(const fs::path& target, const std::string& bytes) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename into " + target.string());
}

}  // namespace

std::optional<std::string> DiskCache::load(const std::string& key) {
  const bool has_data = fs::exists(data_path(key));
  const bool has_meta = fs::exists(meta_path(key));
  if (!has_data && !has_meta) return std::nullopt;
  if (has_data != has_meta)
    throw Error(ErrorCode::CacheCorrupt, "cache entry " + key + " is half written");

  auto meta_text = slurp(meta_path(key));
  auto data = slurp(data_path(key));
  if (!meta_text || !data)
    throw Error(ErrorCode::CacheCorrupt, "cache entry " + key + " unreadable");
  const CacheMetadata meta = CacheMetadata::parse(*meta_text);
  if (meta.bytes != data->size() || meta.sha256 != sha256_hex(*data))
    throw Error(ErrorCode::CacheCorrupt, "cache entry " + key + " fails checksum");

  if (now() - meta.fetched_at > ttl_.count()) return std::nullopt;
  ++hits_;
  return data;
}

void DiskCache::store(const std::string& key, const std::string& bytes,
                      const std::string& endpoint, const BoundingBox& bbox) {
  CacheMetadata meta;
  meta.fetched_at = now();
  meta.endpoint = endpoint;
  meta.bbox = bbox.rounded().to_string();
  meta.bytes = bytes.size();
  meta.sha256 = sha256_hex(bytes);
  write_atomically(data_path(key), bytes);
  write_atomically(meta_path(key), meta.serialize());
  ++stores_;
}

void DiskCache::drop(const std::string& key) {
  std::error_code ec;
  fs::remove(data_path(key), ec);
  fs::remove(meta_path(key), ec);
  ++corrupt_;
}

std::shared_mutex& DiskCache::lock_for(const std::string& key) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[key];
  if (!slot) slot = std::make_unique<std::shared_mutex>();
  return *slot;
}

std::size_t DiskCache::entry_count() const {
  std::size_t n = 0;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir_, ec))
    if (e.path().extension() == ".meta") ++n;
  return n;
}

CacheStats DiskCache::stats() const {
  return CacheStats{hits_.load(), misses_.load(), stores_.load(), corrupt_.load()};
}

namespace {

struct EndpointGate {
  std::counting_semaphore<2> slots{2};
  std::mutex mutex;
  std::chrono::steady_clock::time_point blocked_until{};
};

EndpointGate& gate_for(const std::string& endpoint) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<EndpointGate>> registry;
  std::lock_guard guard(registry_mutex);
  auto& g = registry[endpoint];
  if (!g) g = std::make_unique<EndpointGate>();
  return *g;
}

std::atomic<std::uint64_t> g_requests{0};

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "provider URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

long parse_retry_after(const std::string& value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used == value.size() && v >= 0) return v;
  } catch (const std::logic_error&) {
  }
  return 60;
}

std::string download(const BoundingBox& bbox, const ProviderConfig& provider) {
  EndpointGate& gate = gate_for(provider.endpoint);
  {
    std::lock_guard guard(gate.mutex);
    const auto now = std::chrono::steady_clock::now();
    if (now < gate.blocked_until) {
      auto left = std::chrono::ceil<std::chrono::seconds>(gate.blocked_until - now);
      throw RateLimited(static_cast<long>(left.count()));
    }
  }

  gate.slots.acquire();
  struct Release {
    EndpointGate& g;
    ~Release() { g.slots.release(); }
  } release{gate};

  const Url url = split_url(provider.endpoint);
  httplib::Client client(url.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(provider.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      provider.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  ++g_requests;
  auto res = client.Post(url.path,
                         httplib::Params{{"data", expand_query(provider.query_template, bbox)}});
  if (!res)
    throw Error(ErrorCode::NetworkError, "cannot reach provider " + provider.endpoint +
                                             ": " + httplib::to_string(res.error()));
  if (res->status == 429) {
    const long wait = parse_retry_after(res->get_header_value("Retry-After"));
    {
      std::lock_guard guard(gate.mutex);
      gate.blocked_until = std::chrono::steady_clock::now() + std::chrono::seconds(wait);
    }
    throw RateLimited(wait);
  }
  if (res->status < 200 || res->status >= 300) throw ProviderError(res->status, res->body);
  return normalize_provider_body(res->body);
}

}  // namespace

std::string fetch_region(const BoundingBox& bbox, const ProviderConfig& provider,
                         DiskCache& cache) {
  const BoundingBox box = make_bbox(bbox.min_lon, bbox.min_lat, bbox.max_lon, bbox.max_lat);
  const std::string key = cache.key_for(box, provider.endpoint, provider.query_template);
  std::shared_mutex& lock = cache.lock_for(key);

  {
    std::shared_lock reader(lock);
    try {
      if (auto hit = cache.load(key)) return std::move(*hit);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CacheCorrupt) throw;
    }
  }

  std::unique_lock writer(lock);
  try {
    if (auto hit = cache.load(key)) return std::move(*hit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CacheCorrupt) throw;
    cache.drop(key);
  }
  ++cache.misses_;
  std::string doc = download(box, provider);
  cache.store(key, doc, provider.endpoint, box);
  return doc;
}

std::uint64_t provider_request_count() { return g_requests.load(); }

bool provider_reachable(const ProviderConfig& provider, std::chrono::milliseconds timeout) {
  try {
    const Url url = split_url(provider.endpoint);
    httplib::Client client(url.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    return static_cast<bool>(client.Get(url.path));
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace xenakis::ingest

#include "xenakis/service/server.hpp"

#include <cstdlib>
#include <functional>
#include <shared_mutex>

#include "httplib.h"
#include "json.hpp"
#include "xenakis/error.hpp"
#include "xenakis/hash.hpp"
#include "xenakis/pipeline.hpp"
#include "xenakis/rhythm/pattern.hpp"
#include "xenakis/synth/encode.hpp"
#include "xenakis/version.hpp"

namespace xenakis::service {

using nlohmann::json;

namespace {

/// An error response that is not an Error from the library.
struct HttpError {
  int status;
  std::string code;
  std::string message;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                std::string_view message) {
  send_json(res, status, json_io::error(code, message));
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NetworkError:
    case ErrorCode::ProviderError:
      return 502;
    case ErrorCode::RateLimited:
      return 429;
    case ErrorCode::CacheCorrupt:
    case ErrorCode::Io:
      return 500;
    default:
      return 400;
  }
}

void guarded(httplib::Response& res, const std::function<void()>& body) {
  try {
    body();
  } catch (const HttpError& e) {
    send_error(res, e.status, e.code, e.message);
  } catch (const RateLimited& e) {
    res.set_header("Retry-After", std::to_string(e.retry_after_seconds()));
    send_error(res, 429, to_string(e.code()), e.what());
  } catch (const ProviderError& e) {
    json body = json_io::error(to_string(e.code()), e.what());
    body["error"]["upstream_status"] = e.status();
    body["error"]["upstream_body"] = e.body().substr(0, 1024);
    send_json(res, 502, body);
  } catch (const MalformedDocument& e) {
    json body = json_io::error(to_string(e.code()), e.what());
    body["error"]["line"] = e.line();
    body["error"]["column"] = e.column();
    send_json(res, 400, body);
  } catch (const Error& e) {
    send_error(res, status_for(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

double number_param(const httplib::Request& req, const std::string& name,
                    const std::string& code) {
  if (!req.has_param(name))
    throw HttpError{400, code, "missing query parameter " + name};
  const std::string text = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw HttpError{400, code, "query parameter " + name + " is not a number"};
}

std::size_t bins_value(double v) {
  if (!(v >= 4.0 && v <= 4096.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw Error(ErrorCode::InvalidBinCount, "bins must be an even integer >= 4");
  return static_cast<std::size_t>(v);
}

BoundingBox bbox_from_json(const json& j) {
  try {
    if (j.is_array() && j.size() == 4)
      return make_bbox(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                       j[3].get<double>());
    if (j.is_object())
      return make_bbox(j.at("min_lon").get<double>(), j.at("min_lat").get<double>(),
                       j.at("max_lon").get<double>(), j.at("max_lat").get<double>());
    if (j.is_string()) return parse_bbox(j.get<std::string>());
  } catch (const json::exception&) {
  }
  if (j.is_array() || j.is_object() || j.is_string())
    throw Error(ErrorCode::InvalidBoundingBox,
                "bbox must be [min_lon,min_lat,max_lon,max_lat] or an object with "
                "those keys");
  throw Error(ErrorCode::InvalidBoundingBox, "bbox has the wrong type");
}

void apply_query_overrides(const json& q, SonifyParams& params) {
  try {
    if (q.contains("bins")) params.bins = bins_value(q["bins"].get<double>());
    if (q.contains("bpm")) params.bpm = q["bpm"].get<double>();
    if (q.contains("filter")) {
      const json& f = q["filter"];
      if (f.is_string()) {
        params.filter = ingest::StreetFilter::parse(f.get<std::string>());
      } else {
        params.filter = ingest::StreetFilter::only(f.get<std::set<std::string>>());
      }
    }
    if (q.contains("weighting")) {
      const std::string w = q["weighting"].get<std::string>();
      if (w != "length" && w != "count")
        throw Error(ErrorCode::InvalidArgument, "weighting must be length or count");
      params.weighting =
          w == "length" ? orientation::Weighting::Length : orientation::Weighting::Count;
    }
    if (q.contains("mapping")) {
      const json& m = q["mapping"];
      if (m.contains("thresholds"))
        params.mapping.thresholds = m["thresholds"].get<std::array<double, 3>>();
      if (m.contains("level_gain"))
        params.mapping.level_gain = m["level_gain"].get<std::array<double, 4>>();
      if (m.contains("traversal")) {
        const std::string t = m["traversal"].get<std::string>();
        if (t != "full" && t != "half")
          throw Error(ErrorCode::InvalidArgument, "traversal must be full or half");
        params.mapping.traversal =
            t == "full" ? rhythm::Traversal::FullCircle : rhythm::Traversal::HalfCircle;
      }
    }
  } catch (const json::exception& e) {
    throw HttpError{400, "bad_params", std::string("bad RegionQuery field: ") + e.what()};
  }
  params.validate();
}

void apply_url_overrides(const httplib::Request& req, SonifyParams& params) {
  if (req.has_param("bins")) params.bins = bins_value(number_param(req, "bins", "bad_bins"));
  if (req.has_param("bpm")) params.bpm = number_param(req, "bpm", "bad_tempo");
  if (req.has_param("filter"))
    params.filter = ingest::StreetFilter::parse(req.get_param_value("filter"));
  params.validate();
}

bool is_geojson_object(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return false;
  static const std::set<std::string> kTypes{
      "FeatureCollection", "Feature",    "Point",        "MultiPoint",        "LineString",
      "MultiLineString",   "Polygon",    "MultiPolygon", "GeometryCollection"};
  return kTypes.contains(j["type"].get<std::string>());
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig c;
  c.provider = ingest::ProviderConfig::from_env();
  c.cache_dir = ingest::DiskCache::default_dir();
  if (const char* cap = std::getenv("XENAKIS_LOOP_CAPACITY"); cap && *cap) {
    try {
      const long v = std::stol(cap);
      if (v > 0) c.loop_capacity = static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
  }
  return c;
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      cache_(config_.cache_dir.empty() ? ingest::DiskCache::default_dir() : config_.cache_dir,
             config_.cache_ttl),
      loops_(config_.loop_capacity) {
  install_routes();
}

Service::~Service() { stop(); }

struct Service::Handlers {
  Service& self;

  /// Provider document for a box, with provider-side syntax problems
  /// reported as 502 rather than as a client error.
  Analysis analyze_region(const BoundingBox& bbox, const SonifyParams& params,
                          std::string* source) {
    std::string doc = ingest::fetch_region(bbox, self.config_.provider, self.cache_);
    try {
      Analysis a = analyze(doc, params);
      if (source) *source = std::move(doc);
      return a;
    } catch (const MalformedDocument& e) {
      // don't keep serving the bad document from the region cache
      const auto& p = self.config_.provider;
      const std::string key = self.cache_.key_for(bbox, p.endpoint, p.query_template);
      {
        std::unique_lock writer(self.cache_.lock_for(key));
        self.cache_.drop(key);
      }
      throw HttpError{502, "provider_malformed",
                      std::string("provider sent malformed GeoJSON: ") + e.what()};
    }
  }

  void histogram(const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const BoundingBox bbox = make_bbox(
          number_param(req, "min_lon", "bad_bbox"), number_param(req, "min_lat", "bad_bbox"),
          number_param(req, "max_lon", "bad_bbox"), number_param(req, "max_lat", "bad_bbox"));
      SonifyParams params;
      apply_url_overrides(req, params);
      const Analysis a = analyze_region(bbox, params, nullptr);
      res.status = 200;
      res.set_content(json_io::histogram_document(a.histogram, a.normalized),
                      "application/json");
    });
  }

  void sonify(const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (req.body.size() > self.config_.max_inline_bytes)
        throw HttpError{413, "too_large", "request body exceeds the inline size limit"};
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        throw HttpError{400, "bad_json", std::string("request body is not JSON: ") + e.what()};
      }

      SonifyParams params;
      std::string source;
      std::optional<BoundingBox> bbox;
      bool inline_doc = false;

      if (is_geojson_object(body)) {
        apply_url_overrides(req, params);
        source = req.body;
        inline_doc = true;
      } else if (body.is_object()) {
        const bool has_bbox = body.contains("bbox") && !body["bbox"].is_null();
        const bool has_doc = body.contains("geojson") && !body["geojson"].is_null();
        if (has_bbox && has_doc)
          throw HttpError{400, "ambiguous_input", "send either bbox or geojson, not both"};
        if (!has_bbox && !has_doc)
          throw HttpError{400, "missing_input", "request needs a bbox or a geojson document"};
        apply_query_overrides(body, params);
        if (has_bbox) {
          bbox = bbox_from_json(body["bbox"]);
        } else {
          const json& doc = body["geojson"];
          source = doc.is_string() ? doc.get<std::string>() : doc.dump();
          inline_doc = true;
        }
      } else {
        throw HttpError{400, "missing_input", "request body must be a JSON object"};
      }

      const Analysis a = inline_doc ? analyze(source, params)
                                    : analyze_region(*bbox, params, &source);

      const std::string id =
          sha256_hex(params.fingerprint() + "\n" + sha256_hex(source)).substr(0, 32);
      bool rendered = false;
      if (!self.loops_.get(id)) {
        const synth::AudioLoop loop =
            synth::render_loop(a.pattern, params.bpm, params.sample_rate, params.mapping,
                               params.seed);
        self.loops_.put(id, std::make_shared<const synth::Bytes>(synth::encode_wav(loop)));
        ++self.renders_;
        rendered = true;
      }

      const std::size_t played =
          rhythm::playback_steps(a.pattern, params.mapping.traversal).steps.size();
      const double step_s = synth::step_seconds(params.bpm);
      json out;
      out["histogram"] = json_io::histogram(a.histogram, a.normalized);
      out["pattern"] = json_io::pattern(a.pattern);
      out["pattern_text"] = a.pattern.text();
      out["period"] = rhythm::pattern_period(a.pattern);
      out["loop_id"] = id;
      out["loop_url"] = "/v1/loop/" + id + ".wav";
      out["timing"] = {{"bpm", params.bpm},
                       {"bins", played},
                       {"step_seconds", step_s},
                       {"loop_seconds", static_cast<double>(played) * step_s},
                       {"sample_rate", params.sample_rate},
                       {"samples", synth::loop_sample_count(played, params.bpm,
                                                            params.sample_rate)}};
      out["summary"] = {{"features", a.feature_count},
                        {"segments", a.segment_count},
                        {"skipped", a.summary.skipped()}};
      res.set_header("X-Xenakis-Rendered", rendered ? "1" : "0");
      send_json(res, 200, out);
    });
  }

  void loop(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto wav = self.loops_.get(id);
    if (!wav) {
      send_error(res, 404, "unknown_loop", "no loop with id " + id);
      return;
    }
    res.status = 200;
    res.set_content(reinterpret_cast<const char*>(wav->data()), wav->size(), "audio/wav");
  }

  void healthz(const httplib::Request&, httplib::Response& res) {
    const auto disk = self.cache_.stats();
    json out;
    out["status"] = "ok";
    out["version"] = kVersion;
    out["provider"] = self.config_.provider.endpoint;
    out["provider_reachable"] =
        ingest::provider_reachable(self.config_.provider, self.config_.probe_timeout);
    out["cache_stats"] = {{"loop_store_size", self.loops_.size()},
                          {"loop_store_capacity", self.loops_.capacity()},
                          {"renders", self.renders_.load()},
                          {"region_cache_entries", self.cache_.entry_count()},
                          {"region_cache_hits", disk.hits},
                          {"region_cache_misses", disk.misses}};
    send_json(res, 200, out);
  }
};

void Service::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  auto h = std::make_shared<Handlers>(Handlers{*this});
  server_->set_payload_max_length(config_.max_inline_bytes);

  server_->Get("/v1/histogram", [h](const auto& req, auto& res) { h->histogram(req, res); });
  server_->Post("/v1/sonify", [h](const auto& req, auto& res) { h->sonify(req, res); });
  server_->Get(R"(/v1/loop/([0-9a-f]+)\.wav)",
               [h](const auto& req, auto& res) { h->loop(req, res); });
  server_->Get("/healthz", [h](const auto& req, auto& res) { h->healthz(req, res); });
  server_->Options(".*", [](const auto&, auto& res) { res.status = 204; });

  const auto origins = config_.cors_origins;
  server_->set_post_routing_handler([origins](const httplib::Request& req,
                                              httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    const bool any = std::find(origins.begin(), origins.end(), "*") != origins.end();
    if (any) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (!origin.empty() &&
               std::find(origins.begin(), origins.end(), origin) != origins.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    } else {
      return;
    }
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    switch (res.status) {
      case 404: send_error(res, 404, "not_found", "no such endpoint"); break;
      case 413: send_error(res, 413, "too_large", "request body exceeds the size limit"); break;
      default:
        send_error(res, res.status, "http_" + std::to_string(res.status),
                   httplib::status_message(res.status));
    }
    return httplib::Server::HandlerResponse::Handled;
  });
}

int Service::start(const std::string& host, int port) {
  stop();
  install_routes();
  const int bound =
      port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace xenakis::service

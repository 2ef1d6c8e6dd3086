#include "xenakis/stub_provider.hpp"

#include <algorithm>
#include <limits>
#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "xenakis/error.hpp"
#include "xenakis/ingest/geojson.hpp"

namespace xenakis {

using nlohmann::json;

struct StubProvider::Feature {
  json body;
  BoundingBox extent;
};

namespace {

void extend(BoundingBox& box, const json& coords) {
  if (coords.is_array() && coords.size() >= 2 && coords[0].is_number()) {
    const double lon = coords[0].get<double>();
    const double lat = coords[1].get<double>();
    box.min_lon = std::min(box.min_lon, lon);
    box.max_lon = std::max(box.max_lon, lon);
    box.min_lat = std::min(box.min_lat, lat);
    box.max_lat = std::max(box.max_lat, lat);
    return;
  }
  if (coords.is_array())
    for (const auto& c : coords) extend(box, c);
}

}  // namespace

std::optional<BoundingBox> bbox_from_overpass_query(const std::string& query) {
  static const std::regex kBox(
      R"(\(\s*(-?[0-9.]+)\s*,\s*(-?[0-9.]+)\s*,\s*(-?[0-9.]+)\s*,\s*(-?[0-9.]+)\s*\))");
  std::smatch m;
  if (!std::regex_search(query, m, kBox)) return std::nullopt;
  try {
    return make_bbox(std::stod(m[2]), std::stod(m[1]), std::stod(m[4]), std::stod(m[3]));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

StubProvider::StubProvider(const std::vector<std::string>& geojson_documents) {
  for (const auto& text : geojson_documents) {
    // Validates the document with the real parser first.
    ingest::parse_feature_collection(text);
    const json doc = json::parse(text);
    if (doc.value("type", "") != "FeatureCollection")
      throw MalformedDocument("stub fixtures must be FeatureCollections", 0, 0, 0);
    for (const auto& f : doc["features"]) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      BoundingBox extent{inf, inf, -inf, -inf};
      if (f.contains("geometry") && f["geometry"].is_object())
        extend(extent, f["geometry"].value("coordinates", json::array()));
      features_.push_back(std::make_shared<const Feature>(Feature{f, extent}));
    }
  }
}

std::vector<std::string> StubProvider::load_files(const std::vector<std::string>& paths) {
  std::vector<std::string> docs;
  docs.reserve(paths.size());
  for (const auto& p : paths) docs.push_back(ingest::read_text_file(p));
  return docs;
}

StubProvider::~StubProvider() { stop(); }

std::string StubProvider::respond(const BoundingBox& bbox) const {
  json out = json::array();
  for (const auto& f : features_)
    if (f->extent.intersects(bbox)) out.push_back(f->body);
  return json{{"type", "FeatureCollection"}, {"features", std::move(out)}}.dump();
}

void StubProvider::fail_next(int status, std::string body, std::optional<long> retry_after) {
  std::lock_guard guard(failure_mutex_);
  failure_ = Failure{status, std::move(body), retry_after};
}

void StubProvider::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  auto handle = [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    {
      std::lock_guard guard(failure_mutex_);
      if (failure_) {
        res.status = failure_->status;
        if (failure_->retry_after)
          res.set_header("Retry-After", std::to_string(*failure_->retry_after));
        res.set_content(failure_->body, "text/plain");
        failure_.reset();
        return;
      }
    }
    const std::string query = req.get_param_value("data");
    auto bbox = bbox_from_overpass_query(query);
    if (!bbox) {
      res.status = 400;
      res.set_content("stub provider: no (s,w,n,e) bbox in query", "text/plain");
      return;
    }
    res.set_content(respond(*bbox), "application/geo+json");
  };
  server_->Post(kPath, handle);
  server_->Get(kPath, [handle](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("data")) {
      res.set_content("xenakis stub provider\n", "text/plain");
      return;
    }
    handle(req, res);
  });
  server_->Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("xenakis stub provider\n", "text/plain");
  });
}

int StubProvider::start(const std::string& host, int port) {
  stop();
  install_routes();
  host_ = host;
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw Error(ErrorCode::Io, "stub provider cannot bind " + host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

bool StubProvider::listen(const std::string& host, int port) {
  install_routes();
  host_ = host;
  port_ = port;
  return server_->listen(host, port);
}

void StubProvider::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubProvider::url() const {
  return "http://" + host_ + ":" + std::to_string(port_) + kPath;
}

}  // namespace xenakis

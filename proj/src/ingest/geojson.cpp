#include "xenakis/ingest/geojson.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "xenakis/error.hpp"

namespace xenakis::ingest {

using nlohmann::json;

std::size_t ParseSummary::skipped() const noexcept {
  std::size_t n = skipped_degenerate;
  for (const auto& [type, count] : skipped_by_type) n += count;
  return n;
}

namespace {

[[noreturn]] void structural(const std::string& where, const std::string& what) {
  throw MalformedDocument(what + " at " + (where.empty() ? "/" : where), 0, 0,
                          0);
}

[[noreturn]] void lexical(std::string_view text, const json::parse_error& e) {
  // e.byte is 1-based and may point one past the end for truncated input.
  std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
  if (offset > text.size()) offset = text.size();
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::string msg = e.what();
  // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
  if (auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
  throw MalformedDocument("invalid JSON at line " + std::to_string(line) +
                              ", column " + std::to_string(column) + ": " + msg,
                          line, column, offset);
}

bool is_geometry_type(const std::string& t) {
  return t == "Point" || t == "MultiPoint" || t == "LineString" ||
         t == "MultiLineString" || t == "Polygon" || t == "MultiPolygon" ||
         t == "GeometryCollection";
}

class Parser {
 public:
  ParseResult run(const json& root) {
    const std::string type = type_of(root, "");
    if (type == "FeatureCollection") {
      auto it = root.find("features");
      if (it == root.end()) structural("", "FeatureCollection without \"features\"");
      if (!it->is_array()) structural("/features", "\"features\" must be an array");
      for (std::size_t i = 0; i < it->size(); ++i)
        feature((*it)[i], "/features/" + std::to_string(i), i);
    } else if (type == "Feature") {
      feature(root, "", 0);
    } else if (is_geometry_type(type)) {
      ++result_.summary.features_seen;
      geometry(root, "", "geometry/0", "unknown");
    } else {
      structural("/type", "unsupported GeoJSON type \"" + type + "\"");
    }
    return std::move(result_);
  }

 private:
  ParseResult result_;

  static std::string type_of(const json& node, const std::string& where) {
    if (!node.is_object()) structural(where, "expected a GeoJSON object");
    auto it = node.find("type");
    if (it == node.end()) structural(where, "missing \"type\" member");
    if (!it->is_string()) structural(where + "/type", "\"type\" must be a string");
    return it->get<std::string>();
  }

  void feature(const json& f, const std::string& where, std::size_t index) {
    if (type_of(f, where) != "Feature") structural(where, "expected a Feature");
    ++result_.summary.features_seen;

    std::string id = "feature/" + std::to_string(index);
    if (auto it = f.find("id"); it != f.end()) {
      if (it->is_string())
        id = it->get<std::string>();
      else if (it->is_number())
        id = it->dump();
      else if (!it->is_null())
        structural(where + "/id", "Feature id must be a string or number");
    }

    std::string kind = "unknown";
    if (auto it = f.find("properties"); it != f.end()) {
      if (!it->is_object() && !it->is_null())
        structural(where + "/properties", "properties must be an object or null");
      if (it->is_object()) {
        if (auto hw = it->find("highway"); hw != it->end() && hw->is_string())
          kind = hw->get<std::string>();
      }
    }

    auto g = f.find("geometry");
    if (g == f.end()) structural(where, "Feature without \"geometry\" member");
    geometry(*g, where + "/geometry", id, kind);
  }

  void geometry(const json& g, const std::string& where, const std::string& id,
                const std::string& kind) {
    if (g.is_null()) {
      ++result_.summary.skipped_by_type["null"];
      return;
    }
    const std::string type = type_of(g, where);
    if (!is_geometry_type(type))
      structural(where + "/type", "unsupported geometry type \"" + type + "\"");

    if (type == "GeometryCollection") {
      if (auto it = g.find("geometries"); it == g.end() || !it->is_array())
        structural(where, "GeometryCollection needs a \"geometries\" array");
      ++result_.summary.skipped_by_type[type];
      return;
    }

    auto coords = g.find("coordinates");
    if (coords == g.end() || !coords->is_array())
      structural(where, type + " needs a \"coordinates\" array");

    if (type == "LineString") {
      line(*coords, where + "/coordinates", id, kind);
    } else if (type == "MultiLineString") {
      for (std::size_t i = 0; i < coords->size(); ++i)
        line((*coords)[i], where + "/coordinates/" + std::to_string(i),
             id + "#" + std::to_string(i), kind);
    } else {
      ++result_.summary.skipped_by_type[type];
    }
  }

  static GeoPoint position(const json& p, const std::string& where) {
    if (!p.is_array() || p.size() < 2)
      structural(where, "position must be an array of at least 2 numbers");
    for (const auto& v : p)
      if (!v.is_number()) structural(where, "position members must be numbers");
    try {
      return make_point(p[1].get<double>(), p[0].get<double>());
    } catch (const Error& e) {
      structural(where, e.what());
    }
  }

  void line(const json& coords, const std::string& where, const std::string& id,
            const std::string& kind) {
    if (!coords.is_array()) structural(where, "LineString coordinates must be an array");
    if (coords.size() < 2)
      structural(where, "LineString needs at least 2 positions");

    StreetFeature out{id, kind, {}};
    out.path.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      GeoPoint p = position(coords[i], where + "/" + std::to_string(i));
      if (!out.path.empty() && out.path.back() == p) {
        ++result_.summary.duplicate_points_removed;
        continue;
      }
      out.path.push_back(p);
    }
    if (out.path.size() < 2) {
      ++result_.summary.skipped_degenerate;
      return;
    }
    result_.features.push_back(std::move(out));
  }
};

}  // namespace

ParseResult parse_feature_collection(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    lexical(text, e);
  }
  return Parser{}.run(root);
}

std::string read_text_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace xenakis::ingest

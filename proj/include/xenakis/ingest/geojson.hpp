#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xenakis/geo.hpp"

namespace xenakis::ingest {

/// One polyline from the source document. `kind` is the value of the
/// feature's `highway` property, or "unknown".
struct StreetFeature {
  std::string id;
  std::string kind;
  std::vector<GeoPoint> path;  // >= 2 points, no consecutive duplicates
};

struct ParseSummary {
  std::size_t features_seen = 0;
  /// Features whose geometry is not a (Multi)LineString, keyed by geometry
  /// type ("null" for a null geometry). Kept so other feature classes can be
  /// picked up later without touching the parser.
  std::map<std::string, std::size_t> skipped_by_type;
  /// Lines that collapsed below two distinct points after deduplication.
  std::size_t skipped_degenerate = 0;
  std::size_t duplicate_points_removed = 0;

  std::size_t skipped() const noexcept;
};

struct ParseResult {
  std::vector<StreetFeature> features;
  ParseSummary summary;
};

/// Accepts a FeatureCollection, a single Feature or a bare geometry.
/// MultiLineStrings become one StreetFeature per member line, with ids
/// suffixed "#<member>". Throws MalformedDocument on invalid JSON or on
/// structure that violates RFC 7946 (missing members, bad positions,
/// latitudes outside [-90, 90], LineStrings with fewer than 2 positions).
ParseResult parse_feature_collection(std::string_view text);

/// Reads a whole file; "-" means standard input. Throws Error(Io).
std::string read_text_file(const std::string& path);

}  // namespace xenakis::ingest

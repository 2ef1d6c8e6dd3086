#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "xenakis/geo.hpp"
#include "xenakis/ingest/geojson.hpp"

namespace xenakis::ingest {

/// One straight piece of a street.
struct StreetSegment {
  GeoPoint a;
  GeoPoint b;
  double length_m = 0.0;     // > 0
  double bearing_deg = 0.0;  // folded, [0, 180)
};

/// Segments shorter than this are dropped as noise.
inline constexpr double kNoiseFloorMeters = 0.5;

class StreetFilter {
 public:
  /// Road classes that usually make up a city's drivable grid, plus their
  /// "_link" ramps.
  static StreetFilter defaults();
  static StreetFilter accept_all();
  static StreetFilter only(std::set<std::string> kinds);
  /// "all", "default", or a comma-separated list of kinds.
  static StreetFilter parse(const std::string& text);

  bool accepts(const std::string& kind) const;
  bool accepts_everything() const noexcept { return accept_all_; }
  const std::set<std::string>& kinds() const noexcept { return kinds_; }

 private:
  bool accept_all_ = false;
  std::set<std::string> kinds_;
};

std::vector<StreetSegment> explode_segments(
    std::span<const StreetFeature> features, const StreetFilter& filter);

}  // namespace xenakis::ingest

#include "xenakis/ingest/segments.hpp"

#include <sstream>

#include "xenakis/orientation/geodesy.hpp"

namespace xenakis::ingest {

StreetFilter StreetFilter::defaults() {
  StreetFilter f;
  for (const char* kind : {"motorway", "trunk", "primary", "secondary",
                           "tertiary", "residential", "unclassified",
                           "living_street"}) {
    f.kinds_.insert(kind);
    f.kinds_.insert(std::string(kind) + "_link");
  }
  return f;
}

StreetFilter StreetFilter::accept_all() {
  StreetFilter f;
  f.accept_all_ = true;
  return f;
}

StreetFilter StreetFilter::only(std::set<std::string> kinds) {
  StreetFilter f;
  f.kinds_ = std::move(kinds);
  return f;
}

StreetFilter StreetFilter::parse(const std::string& text) {
  if (text == "all" || text == "*") return accept_all();
  if (text.empty() || text == "default") return defaults();
  std::set<std::string> kinds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) kinds.insert(item);
  return only(std::move(kinds));
}

bool StreetFilter::accepts(const std::string& kind) const {
  return accept_all_ || kinds_.contains(kind);
}

std::vector<StreetSegment> explode_segments(
    std::span<const StreetFeature> features, const StreetFilter& filter) {
  std::vector<StreetSegment> out;
  for (const auto& feature : features) {
    if (!filter.accepts(feature.kind)) continue;
    for (std::size_t i = 0; i + 1 < feature.path.size(); ++i) {
      const GeoPoint& a = feature.path[i];
      const GeoPoint& b = feature.path[i + 1];
      double length = orientation::haversine_m(a, b);
      if (length < kNoiseFloorMeters) continue;
      out.push_back({a, b, length,
                     orientation::fold_bearing(orientation::forward_azimuth(a, b))});
    }
  }
  return out;
}

}  // namespace xenakis::ingest

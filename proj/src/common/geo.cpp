#include "xenakis/geo.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "xenakis/error.hpp"

namespace xenakis {

namespace {

double round5(double v) {
  double r = std::round(v * 1e5) / 1e5;
  return r == 0.0 ? 0.0 : r;  // no "-0.00000" in keys
}

std::string fixed5(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", round5(v));
  return buf;
}

}  // namespace

GeoPoint make_point(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon))
    throw Error(ErrorCode::OutOfRange, "coordinate is not a finite number");
  if (lat < -90.0 || lat > 90.0)
    throw Error(ErrorCode::OutOfRange,
                "latitude " + std::to_string(lat) + " outside [-90, 90]");
  if (lon < -180.0 || lon > 180.0) {
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0.0) lon += 360.0;
    lon -= 180.0;
  }
  return GeoPoint{lat, lon};
}

bool BoundingBox::contains(const GeoPoint& p) const noexcept {
  return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
         p.lon <= max_lon;
}

bool BoundingBox::intersects(const BoundingBox& o) const noexcept {
  return !(o.min_lon > max_lon || o.max_lon < min_lon || o.min_lat > max_lat ||
           o.max_lat < min_lat);
}

BoundingBox BoundingBox::rounded() const {
  return BoundingBox{round5(min_lon), round5(min_lat), round5(max_lon),
                     round5(max_lat)};
}

std::string BoundingBox::overpass_order() const {
  return fixed5(min_lat) + "," + fixed5(min_lon) + "," + fixed5(max_lat) +
         "," + fixed5(max_lon);
}

std::string BoundingBox::to_string() const {
  return fixed5(min_lon) + "," + fixed5(min_lat) + "," + fixed5(max_lon) +
         "," + fixed5(max_lat);
}

BoundingBox make_bbox(double min_lon, double min_lat, double max_lon,
                      double max_lat) {
  for (double v : {min_lon, min_lat, max_lon, max_lat})
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidBoundingBox, "bbox has non-finite value");
  if (min_lat < -90.0 || max_lat > 90.0)
    throw Error(ErrorCode::InvalidBoundingBox, "bbox latitude outside [-90, 90]");
  if (min_lon < -180.0 || max_lon > 180.0)
    throw Error(ErrorCode::InvalidBoundingBox,
                "bbox longitude outside [-180, 180]");
  if (!(min_lat < max_lat))
    throw Error(ErrorCode::InvalidBoundingBox, "bbox min_lat must be < max_lat");
  if (!(min_lon < max_lon))
    throw Error(ErrorCode::InvalidBoundingBox,
                "bbox min_lon must be < max_lon (antimeridian crossing boxes "
                "are not supported)");
  return BoundingBox{min_lon, min_lat, max_lon, max_lat};
}

BoundingBox parse_bbox(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      parts.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidBoundingBox,
                  "bbox component '" + item + "' is not a number");
    }
  }
  if (parts.size() != 4)
    throw Error(ErrorCode::InvalidBoundingBox,
                "bbox needs 4 comma-separated values: "
                "min_lon,min_lat,max_lon,max_lat");
  return make_bbox(parts[0], parts[1], parts[2], parts[3]);
}

}  // namespace xenakis

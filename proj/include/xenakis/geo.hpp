#pragma once

#include <string>

namespace xenakis {

/// Geographic position in degrees. Construct through make_point() to get the
/// range checks and longitude folding.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Validates latitude and folds longitude into [-180, 180].
/// Throws Error(OutOfRange) for |lat| > 90 or non-finite input.
GeoPoint make_point(double lat, double lon);

/// Axis-aligned lon/lat box. Boxes crossing the antimeridian are not
/// representable: min_lon < max_lon always holds for a validated box.
struct BoundingBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

  bool contains(const GeoPoint& p) const noexcept;
  bool intersects(const BoundingBox& other) const noexcept;

  /// Same box with every coordinate rounded to 5 decimals (about 1 m).
  BoundingBox rounded() const;

  /// "south,west,north,east", the Overpass QL ordering.
  std::string overpass_order() const;
  /// "min_lon,min_lat,max_lon,max_lat" with 5 decimals.
  std::string to_string() const;
};

/// Throws Error(InvalidBoundingBox) unless the box is finite, inside the
/// valid coordinate ranges and strictly non-degenerate.
BoundingBox make_bbox(double min_lon, double min_lat, double max_lon,
                      double max_lat);

/// Parses "min_lon,min_lat,max_lon,max_lat".
BoundingBox parse_bbox(const std::string& text);

}  // namespace xenakis

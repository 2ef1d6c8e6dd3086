#pragma once

#include "xenakis/geo.hpp"

namespace xenakis::orientation {

inline constexpr double kEarthRadiusMeters = 6371000.0;

/// Initial great-circle bearing from a to b, degrees clockwise from true
/// north in [0, 360). Throws Error(DegenerateSegment) when a == b.
double forward_azimuth(const GeoPoint& a, const GeoPoint& b);

/// Identifies opposite directions: az mod 180, in [0, 180).
double fold_bearing(double azimuth_deg);

/// Great-circle distance on the mean-radius sphere.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

}  // namespace xenakis::orientation

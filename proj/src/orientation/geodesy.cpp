#include "xenakis/orientation/geodesy.hpp"

#include <cmath>
#include <numbers>

#include "xenakis/error.hpp"

namespace xenakis::orientation {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

double forward_azimuth(const GeoPoint& a, const GeoPoint& b) {
  if (a == b)
    throw Error(ErrorCode::DegenerateSegment,
                "azimuth undefined for coincident points");
  const double phi_a = a.lat * kDegToRad;
  const double phi_b = b.lat * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;

  const double y = std::sin(dlambda) * std::cos(phi_b);
  const double x = std::cos(phi_a) * std::sin(phi_b) -
                   std::sin(phi_a) * std::cos(phi_b) * std::cos(dlambda);
  double deg = std::atan2(y, x) * kRadToDeg;
  if (deg < 0.0) deg += 360.0;
  // -tiny + 360 rounds to 360.0
  return deg >= 360.0 ? 0.0 : deg;
}

double fold_bearing(double azimuth_deg) {
  double f = std::fmod(azimuth_deg, 180.0);
  if (f < 0.0) f += 180.0;
  return f >= 180.0 ? 0.0 : f;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi_a = a.lat * kDegToRad;
  const double phi_b = b.lat * kDegToRad;
  const double dphi = phi_b - phi_a;
  const double dlambda = (b.lon - a.lon) * kDegToRad;

  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi_a) * std::cos(phi_b) * s2 * s2;
  if (h > 1.0) h = 1.0;
  return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

}  // namespace xenakis::orientation

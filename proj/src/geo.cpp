#include "vanetsim/geo.hpp"

#include <cmath>

namespace vanet {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

bool valid_geo(const GeoPoint& p) {
    return p.latitude >= -90.0 && p.latitude <= 90.0 &&
           p.longitude >= -180.0 && p.longitude <= 180.0 &&
           std::isfinite(p.altitude);
}

double geo_distance_m(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.latitude * kDegToRad;
    const double phi2 = b.latitude * kDegToRad;
    const double dphi = (b.latitude - a.latitude) * kDegToRad;
    const double dlam = (b.longitude - a.longitude) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double bearing_deg(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.latitude * kDegToRad;
    const double phi2 = b.latitude * kDegToRad;
    const double dlam = (b.longitude - a.longitude) * kDegToRad;
    const double y = std::sin(dlam) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) -
                     std::sin(phi1) * std::cos(phi2) * std::cos(dlam);
    double deg = std::atan2(y, x) / kDegToRad;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t) {
    return GeoPoint{a.latitude + (b.latitude - a.latitude) * t,
                    a.longitude + (b.longitude - a.longitude) * t,
                    a.altitude + (b.altitude - a.altitude) * t};
}

}  // namespace vanet

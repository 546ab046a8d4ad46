#pragma once

namespace vanet {

// Spherical earth radius used for all geodesy, in metres.
inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
    double latitude = 0.0;   // decimal degrees, [-90, 90]
    double longitude = 0.0;  // decimal degrees, [-180, 180]
    double altitude = 0.0;   // metres above sea level
};

bool valid_geo(const GeoPoint& p);

// Great-circle (haversine) distance in metres. Symmetric, non-negative.
double geo_distance_m(const GeoPoint& a, const GeoPoint& b);

// Forward bearing from a to b in degrees clockwise from north, [0, 360).
double bearing_deg(const GeoPoint& a, const GeoPoint& b);

// Point a fraction t in [0, 1] along the straight segment a->b
// (linear in lat/lon/alt; segments here are at most a few hundred metres).
GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t);

}  // namespace vanet

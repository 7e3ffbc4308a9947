#pragma once

namespace lasertwin::constants {

inline constexpr double kSpeedOfLight = 299792458.0;        // [m/s]
inline constexpr double kPlanck = 6.62607015e-34;           // [J s]
inline constexpr double kEarthMu = 3.986004418e14;          // [m^3/s^2]
inline constexpr double kEarthRadius = 6371000.0;           // [m] mean spherical
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // [rad/s] sidereal
inline constexpr double kGeoAltitude = 35786000.0;          // [m]
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace lasertwin::constants

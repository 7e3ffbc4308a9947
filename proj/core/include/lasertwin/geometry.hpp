#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lasertwin::geometry {

enum class PlatformKind { kGroundSite, kHaps, kDrone, kLeoCircular, kGeo };

/// One vertex of a drone waypoint track (piecewise-linear at fixed altitude).
struct Waypoint {
  double time_s = 0.0;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

/// Static description of one platform. Angles in degrees, altitude above the
/// mean (spherical) Earth radius.
struct PlatformSpec {
  PlatformKind kind = PlatformKind::kGroundSite;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
  // LEO_CIRCULAR only
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double initial_phase_deg = 0.0;  // argument of latitude at t = 0
  // GEO only
  double sub_satellite_longitude_deg = 0.0;
  // DRONE only
  std::vector<Waypoint> waypoints;

  void validate() const;  // throws ConfigError
};

/// Spherical Earth, non-rotating by default. With rotation enabled,
/// earth-fixed platforms (ground, HAPS, drone, GEO) spin about +z at the
/// sidereal rate while LEO orbits stay inertial.
struct EarthModel {
  bool rotating = false;
};

struct PlatformState {
  double epoch_s = 0.0;
  Eigen::Vector3d position_m = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity_mps = Eigen::Vector3d::Zero();
};

/// Instantaneous geometry of one link, evaluated at a common epoch.
struct LinkGeometry {
  double range_m = 0.0;
  double elevation_rad = 0.0;  // of the line of sight at the lower platform
  Eigen::Vector3d line_of_sight = Eigen::Vector3d::UnitX();  // unit, a -> b
  double transverse_speed_mps = 0.0;
  double point_ahead_rad = 0.0;  // alpha = 2 v_t / c (first order)
  Eigen::Vector3d point_ahead_direction = Eigen::Vector3d::Zero();  // unit, perp LOS
};

struct PassWindow {
  double rise_s = 0.0;
  double set_s = 0.0;
  double max_elevation_rad = 0.0;
  double duration_s = 0.0;
};

/// Platform state at time t. LEO platforms follow circular Keplerian motion;
/// GEO is fixed in the rotating-Earth frame; ground/HAPS sites are fixed
/// points; drones interpolate their waypoint track.
PlatformState propagate(const PlatformSpec& spec, double t_s,
                        const EarthModel& earth = {});

/// Range, elevation, transverse speed and first-order point-ahead angle
/// between two states at the same epoch. Throws GeometryError for
/// coincident positions or mismatched epochs.
LinkGeometry link_geometry(const PlatformState& a, const PlatformState& b);

/// True if the straight segment between the two positions dips below the
/// Earth surface (used for intersatellite occlusion).
bool earth_blocked(const Eigen::Vector3d& a_m, const Eigen::Vector3d& b_m);

/// Visibility windows of an orbiting platform from a site, scanned at
/// `step_s` (must be <= 1 s) and refined by bisection to +-0.1 s. Windows
/// are clamped to [t0, t1], sorted, and non-overlapping.
std::vector<PassWindow> predict_passes(const PlatformSpec& orbit,
                                       const PlatformSpec& site,
                                       double min_elevation_rad, double t0_s,
                                       double t1_s, double step_s,
                                       const EarthModel& earth = {});

struct PointAheadSample {
  double t_s = 0.0;
  double alpha_rad = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
};

/// Point-ahead angle sampled over a window, one entry per step.
std::vector<PointAheadSample> point_ahead_series(const PlatformSpec& a,
                                                 const PlatformSpec& b,
                                                 double t0_s, double t1_s,
                                                 double step_s,
                                                 const EarthModel& earth = {});

/// Exact point-ahead angle from the two-point light-time fixed point: the
/// angle at platform a between the retarded (receive) and advanced
/// (transmit) directions to platform b. Validation path for the first-order
/// 2 v_t / c formula.
double point_ahead_light_time(const PlatformSpec& a, const PlatformSpec& b,
                              double t_s, const EarthModel& earth = {});

}  // namespace lasertwin::geometry

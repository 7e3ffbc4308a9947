#include "lasertwin/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"

namespace lasertwin::geometry {

namespace {

using constants::deg_to_rad;
using constants::kEarthMu;
using constants::kEarthRadius;
using constants::kEarthRotationRate;
using constants::kGeoAltitude;

Eigen::Vector3d spherical_position(double lat_rad, double lon_rad, double radius) {
  return {radius * std::cos(lat_rad) * std::cos(lon_rad),
          radius * std::cos(lat_rad) * std::sin(lon_rad),
          radius * std::sin(lat_rad)};
}

Eigen::Matrix3d rot_z(double angle_rad) {
  Eigen::Matrix3d m;
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return m;
}

Eigen::Matrix3d rot_x(double angle_rad) {
  Eigen::Matrix3d m;
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  m << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  return m;
}

/// Earth-fixed position/velocity, before any frame rotation.
struct BodyFixed {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
};

BodyFixed earth_fixed_track(const PlatformSpec& spec, double t_s) {
  if (spec.kind == PlatformKind::kDrone) {
    const auto& wps = spec.waypoints;
    const double radius = kEarthRadius + spec.altitude_m;
    auto wp_pos = [&](const Waypoint& w) {
      return spherical_position(deg_to_rad(w.latitude_deg),
                                deg_to_rad(w.longitude_deg), radius);
    };
    if (t_s <= wps.front().time_s) return {wp_pos(wps.front()), Eigen::Vector3d::Zero()};
    if (t_s >= wps.back().time_s) return {wp_pos(wps.back()), Eigen::Vector3d::Zero()};
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      if (t_s <= wps[i + 1].time_s) {
        const Eigen::Vector3d p0 = wp_pos(wps[i]);
        const Eigen::Vector3d p1 = wp_pos(wps[i + 1]);
        const double span = wps[i + 1].time_s - wps[i].time_s;
        const double f = (t_s - wps[i].time_s) / span;
        return {p0 + f * (p1 - p0), (p1 - p0) / span};
      }
    }
    return {wp_pos(wps.back()), Eigen::Vector3d::Zero()};
  }

  double lat = spec.latitude_deg;
  double lon = spec.longitude_deg;
  double radius = kEarthRadius + spec.altitude_m;
  if (spec.kind == PlatformKind::kGeo) {
    lat = 0.0;
    lon = spec.sub_satellite_longitude_deg;
    radius = kEarthRadius + kGeoAltitude;
  }
  return {spherical_position(deg_to_rad(lat), deg_to_rad(lon), radius),
          Eigen::Vector3d::Zero()};
}

}  // namespace

void PlatformSpec::validate() const {
  if (latitude_deg < -90.0 || latitude_deg > 90.0)
    throw ConfigError("platform latitude_deg must be in [-90, 90]");
  if (longitude_deg < -180.0 || longitude_deg >= 180.0)
    throw ConfigError("platform longitude_deg must be in [-180, 180)");
  if (altitude_m < 0.0) throw ConfigError("platform altitude_m must be >= 0");

  switch (kind) {
    case PlatformKind::kLeoCircular:
      if (altitude_m < 200e3 || altitude_m > 2000e3)
        throw ConfigError("LEO altitude_m must be in [200 km, 2000 km]");
      break;
    case PlatformKind::kHaps:
      if (altitude_m < 15e3 || altitude_m > 25e3)
        throw ConfigError("HAPS altitude_m must be in [15 km, 25 km]");
      break;
    case PlatformKind::kGeo:
      if (altitude_m != 0.0 && altitude_m != constants::kGeoAltitude)
        throw ConfigError("GEO altitude is fixed at 35786 km and cannot be set");
      if (sub_satellite_longitude_deg < -180.0 || sub_satellite_longitude_deg >= 180.0)
        throw ConfigError("GEO sub_satellite_longitude_deg must be in [-180, 180)");
      break;
    case PlatformKind::kDrone:
      if (waypoints.empty())
        throw ConfigError("DRONE platform needs at least one waypoint");
      for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        if (waypoints[i + 1].time_s <= waypoints[i].time_s)
          throw ConfigError("DRONE waypoint times must be strictly increasing");
      }
      break;
    default:
      break;
  }
}

PlatformState propagate(const PlatformSpec& spec, double t_s,
                        const EarthModel& earth) {
  if (t_s < 0.0) throw ConfigError("propagate t_s must be >= 0");
  spec.validate();

  if (spec.kind == PlatformKind::kLeoCircular) {
    // Circular Keplerian orbit in the inertial frame.
    const double a = kEarthRadius + spec.altitude_m;
    const double n = std::sqrt(kEarthMu / (a * a * a));  // [rad/s]
    const double u = deg_to_rad(spec.initial_phase_deg) + n * t_s;
    const Eigen::Matrix3d plane =
        rot_z(deg_to_rad(spec.raan_deg)) * rot_x(deg_to_rad(spec.inclination_deg));
    const Eigen::Vector3d pos_plane(a * std::cos(u), a * std::sin(u), 0.0);
    const Eigen::Vector3d vel_plane(-a * n * std::sin(u), a * n * std::cos(u), 0.0);
    return {t_s, plane * pos_plane, plane * vel_plane};
  }

  const BodyFixed fixed = earth_fixed_track(spec, t_s);
  if (!earth.rotating) {
    return {t_s, fixed.position, fixed.velocity};
  }
  const Eigen::Matrix3d spin = rot_z(kEarthRotationRate * t_s);
  const Eigen::Vector3d omega(0.0, 0.0, kEarthRotationRate);
  const Eigen::Vector3d pos = spin * fixed.position;
  return {t_s, pos, spin * fixed.velocity + omega.cross(pos)};
}

LinkGeometry link_geometry(const PlatformState& a, const PlatformState& b) {
  if (std::abs(a.epoch_s - b.epoch_s) > 1e-9)
    throw GeometryError("link_geometry states are at different epochs");

  LinkGeometry link;
  const Eigen::Vector3d delta = b.position_m - a.position_m;
  link.range_m = delta.norm();
  if (link.range_m < 1e-3)
    throw GeometryError("degenerate geometry: coincident platform positions");
  link.line_of_sight = delta / link.range_m;

  // Elevation of the line of sight above the local horizon, at whichever
  // platform sits lower.
  const bool a_lower = a.position_m.norm() <= b.position_m.norm();
  const Eigen::Vector3d& lower_pos = a_lower ? a.position_m : b.position_m;
  const Eigen::Vector3d los_up = a_lower ? link.line_of_sight
                                         : Eigen::Vector3d(-link.line_of_sight);
  const double s = lower_pos.normalized().dot(los_up);
  link.elevation_rad = std::asin(std::clamp(s, -1.0, 1.0));

  const Eigen::Vector3d v_rel = b.velocity_mps - a.velocity_mps;
  const Eigen::Vector3d v_transverse =
      v_rel - v_rel.dot(link.line_of_sight) * link.line_of_sight;
  link.transverse_speed_mps = v_transverse.norm();
  link.point_ahead_rad = 2.0 * link.transverse_speed_mps / constants::kSpeedOfLight;
  if (link.transverse_speed_mps > 1e-12) {
    link.point_ahead_direction = v_transverse / link.transverse_speed_mps;
  }
  return link;
}

bool earth_blocked(const Eigen::Vector3d& a_m, const Eigen::Vector3d& b_m) {
  const Eigen::Vector3d d = b_m - a_m;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return false;
  const double s = std::clamp(-a_m.dot(d) / len2, 0.0, 1.0);
  // 1 m margin so surface endpoints do not self-occlude.
  return (a_m + s * d).norm() < kEarthRadius - 1.0;
}

std::vector<PassWindow> predict_passes(const PlatformSpec& orbit,
                                       const PlatformSpec& site,
                                       double min_elevation_rad, double t0_s,
                                       double t1_s, double step_s,
                                       const EarthModel& earth) {
  if (orbit.kind != PlatformKind::kLeoCircular)
    throw ConfigError("predict_passes: orbit platform must be LEO_CIRCULAR");
  if (site.kind != PlatformKind::kGroundSite && site.kind != PlatformKind::kHaps)
    throw ConfigError("predict_passes: site platform must be GROUND_SITE or HAPS");
  if (step_s <= 0.0 || step_s > 1.0)
    throw ConfigError("predict_passes: step_s must be in (0, 1] s");

  std::vector<PassWindow> passes;
  if (t1_s <= t0_s || min_elevation_rad >= constants::kPi / 2.0) return passes;

  const auto elevation = [&](double t) {
    return link_geometry(propagate(site, t, earth), propagate(orbit, t, earth))
        .elevation_rad;
  };
  const auto refine = [&](double lo, double hi, bool rising) {
    // Invariant: the mask crossing lies in [lo, hi].
    while (hi - lo > 0.02) {
      const double mid = 0.5 * (lo + hi);
      const bool above = elevation(mid) >= min_elevation_rad;
      if (above == rising) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  bool above = elevation(t0_s) >= min_elevation_rad;
  double rise = above ? t0_s : 0.0;
  double max_el = above ? elevation(t0_s) : 0.0;
  double prev = t0_s;
  for (double t = t0_s + step_s;; t += step_s) {
    const bool last = t >= t1_s;
    if (last) t = t1_s;
    const double el = elevation(t);
    const bool now_above = el >= min_elevation_rad;
    if (now_above && !above) {
      rise = refine(prev, t, true);
      max_el = el;
    } else if (now_above) {
      max_el = std::max(max_el, el);
    }
    if (!now_above && above) {
      const double set = refine(prev, t, false);
      passes.push_back({rise, set, max_el, set - rise});
    } else if (last && now_above) {
      passes.push_back({rise, t1_s, max_el, t1_s - rise});
    }
    above = now_above;
    prev = t;
    if (last) break;
  }
  return passes;
}

std::vector<PointAheadSample> point_ahead_series(const PlatformSpec& a,
                                                 const PlatformSpec& b,
                                                 double t0_s, double t1_s,
                                                 double step_s,
                                                 const EarthModel& earth) {
  if (step_s <= 0.0) throw ConfigError("point_ahead_series step_s must be > 0");
  std::vector<PointAheadSample> series;
  const auto n = static_cast<std::size_t>((t1_s - t0_s) / step_s + 1e-9);
  series.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = t0_s + static_cast<double>(i) * step_s;
    const LinkGeometry link =
        link_geometry(propagate(a, t, earth), propagate(b, t, earth));
    series.push_back({t, link.point_ahead_rad, link.point_ahead_direction});
  }
  return series;
}

double point_ahead_light_time(const PlatformSpec& a, const PlatformSpec& b,
                              double t_s, const EarthModel& earth) {
  const Eigen::Vector3d origin = propagate(a, t_s, earth).position_m;
  const auto counter_pos = [&](double t) {
    return propagate(b, std::max(0.0, t), earth).position_m;
  };

  // Fixed point of tau = |p_b(t -+ tau) - p_a(t)| / c for the retarded
  // (receive) and advanced (transmit) directions.
  const auto solve = [&](double sign) {
    double tau = (counter_pos(t_s) - origin).norm() / constants::kSpeedOfLight;
    for (int i = 0; i < 10; ++i) {
      tau = (counter_pos(t_s + sign * tau) - origin).norm() /
            constants::kSpeedOfLight;
    }
    return (counter_pos(t_s + sign * tau) - origin).normalized();
  };

  const Eigen::Vector3d receive_dir = solve(-1.0);
  const Eigen::Vector3d transmit_dir = solve(+1.0);
  return std::atan2(receive_dir.cross(transmit_dir).norm(),
                    receive_dir.dot(transmit_dir));
}

}  // namespace lasertwin::geometry

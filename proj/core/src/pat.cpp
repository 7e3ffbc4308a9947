#include "lasertwin/pat.hpp"

#include <algorithm>
#include <cmath>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/optics.hpp"
#include "lasertwin/rng.hpp"

namespace lasertwin::pat {

namespace {

using constants::kPi;

Eigen::Vector2d clip_to_fov(const Eigen::Vector2d& reading, double fov_rad) {
  const double norm = reading.norm();
  if (norm <= fov_rad) return reading;
  return reading * (fov_rad / norm);
}

double clamp_abs(double value, double bound) {
  return std::clamp(value, -bound, bound);
}

void check_dt(const PatConfig& cfg, double dt_s) {
  if (std::abs(dt_s * cfg.fpm_rate_hz - 1.0) > 1e-9) {
    throw ConfigError("pat step dt_s must equal 1 / fpm_rate_hz");
  }
}

/// Rate-command PI with clamping anti-windup: the integrator freezes while
/// the command is saturated.
double pi_axis(double error, const PiGains& gains, double dt, double rate_limit,
               double& integrator) {
  double command = gains.kp * error + integrator;
  const bool saturated = std::abs(command) > rate_limit;
  if (!saturated) {
    integrator = clamp_abs(integrator + gains.ki * error * dt, rate_limit);
  }
  return clamp_abs(command, rate_limit);
}

void reset_fine_loop(PatState& s) {
  s.fpm_rad.setZero();
  s.fpm_integrator.setZero();
  s.rms_accum_rad2 = 0.0;
  s.rms_count = 0;
}

void enter_acquire(PatState& s) {
  s.mode = Mode::kAcquire;
  s.spiral_center_rad = s.gimbal_rad;
  s.spiral_angle_rad = 0.0;
  s.gimbal_integrator.setZero();
  s.dwell_count = 0;
  reset_fine_loop(s);
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kIdle: return "IDLE";
    case Mode::kAcquire: return "ACQUIRE";
    case Mode::kCoarseTrack: return "COARSE_TRACK";
    case Mode::kFineTrack: return "FINE_TRACK";
    case Mode::kLinked: return "LINKED";
    case Mode::kLost: return "LOST";
  }
  return "?";
}

void PatConfig::validate() const {
  if (fine_fov_rad <= 0.0 || coarse_fov_rad <= 0.0)
    throw ConfigError("pat detector FOVs must be > 0");
  if (fine_fov_rad >= coarse_fov_rad)
    throw ConfigError("fine detector FOV must be smaller than coarse FOV");
  if (gimbal_rate_hz <= 0.0 || fpm_rate_hz <= 0.0)
    throw ConfigError("pat loop rates must be > 0");
  if (fpm_rate_hz < gimbal_rate_hz)
    throw ConfigError("FPM loop rate must be >= gimbal loop rate");
  if (gimbal_gains.kp <= 0.0 || gimbal_gains.ki <= 0.0 || fpm_gains.kp <= 0.0 ||
      fpm_gains.ki <= 0.0)
    throw ConfigError("pat PI gains must be > 0");
  if (gimbal_rate_limit_rad_s <= 0.0)
    throw ConfigError("gimbal_rate_limit_rad_s must be > 0");
  if (fpm_range_rad <= 0.0) throw ConfigError("fpm_range_rad must be > 0");
  if (coarse_noise_rad < 0.0 || fine_noise_rad < 0.0)
    throw ConfigError("pat detector noise must be >= 0");
  if (handover_dwell_steps <= 0)
    throw ConfigError("handover_dwell_steps must be > 0");
  if (link_rms_threshold_rad <= 0.0)
    throw ConfigError("link_rms_threshold_rad must be > 0");
  if (uncertainty_cone_rad <= 0.0)
    throw ConfigError("uncertainty_cone_rad must be > 0");
  if (spiral_pitch_factor <= 0.0 || spiral_pitch_factor > 0.8)
    throw ConfigError("spiral_pitch_factor must be in (0, 0.8]");
  gimbal_divider();
}

int PatConfig::gimbal_divider() const {
  const double ratio = fpm_rate_hz / gimbal_rate_hz;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9) {
    throw ConfigError("fpm_rate_hz must be an integer multiple of gimbal_rate_hz");
  }
  return static_cast<int>(rounded);
}

PatState acquire_step(const PatState& state, const PatConfig& cfg,
                      const Eigen::Vector2d& true_target_rad,
                      double beacon_power_dbm, double dt_s) {
  if (state.mode != Mode::kAcquire)
    throw ConfigError("acquire_step requires mode ACQUIRE");
  check_dt(cfg, dt_s);

  PatState s = state;
  s.tick = state.tick + 1;

  const Eigen::Vector2d error = true_target_rad - s.gimbal_rad;
  if (error.norm() < cfg.coarse_fov_rad &&
      beacon_power_dbm >= cfg.beacon_threshold_dbm) {
    s.mode = Mode::kCoarseTrack;
    s.gimbal_integrator.setZero();
    s.dwell_count = 0;
    s.residual_rad = (true_target_rad - s.gimbal_rad - s.fpm_rad).norm();
    return s;
  }

  // Advance along the Archimedean spiral r = b * phi at the slew-rate limit.
  // After a full cone sweep the radius folds back toward the center
  // (triangle wave in phi), so coverage restarts without a slew-rate jump.
  const double pitch = cfg.spiral_pitch_factor * cfg.coarse_fov_rad;
  const double b = pitch / (2.0 * kPi);
  const double arc = cfg.gimbal_rate_limit_rad_s * dt_s;
  const double phi_full = cfg.uncertainty_cone_rad / b;
  const auto radius_at = [&](double phi) {
    const double m = std::fmod(phi, 2.0 * phi_full);
    return b * (m < phi_full ? m : 2.0 * phi_full - m);
  };
  double phi = s.spiral_angle_rad;
  phi += arc / std::max(std::hypot(radius_at(phi), b), 1e-12);
  const double radius = radius_at(phi);
  s.spiral_angle_rad = phi;
  const Eigen::Vector2d target_point =
      s.spiral_center_rad + radius * Eigen::Vector2d(std::cos(phi), std::sin(phi));
  // Chase the analytic spiral point with the displacement clamped to the
  // slew-rate limit; the bounded lag this introduces is far below the
  // coverage pitch margin.
  Eigen::Vector2d delta = target_point - s.gimbal_rad;
  const double len = delta.norm();
  if (len > arc) delta *= arc / len;
  s.gimbal_rad += delta;
  s.residual_rad = (true_target_rad - s.gimbal_rad - s.fpm_rad).norm();
  return s;
}

PatState track_step(const PatState& state, const PatConfig& cfg,
                    const Eigen::Vector2d& true_target_rad,
                    const Eigen::Vector2d& pam_command_rad, double dt_s,
                    const SensorNoise& noise) {
  if (state.mode != Mode::kCoarseTrack && state.mode != Mode::kFineTrack &&
      state.mode != Mode::kLinked)
    throw ConfigError("track_step requires a tracking mode");
  check_dt(cfg, dt_s);

  PatState s = state;
  s.tick = state.tick + 1;
  s.pam_rad = pam_command_rad;  // transmit offset only, never fed back

  const Eigen::Vector2d coarse_error = true_target_rad - s.gimbal_rad;
  if (coarse_error.norm() > cfg.coarse_fov_rad) {
    s.mode = Mode::kLost;
    s.residual_rad = (true_target_rad - s.gimbal_rad - s.fpm_rad).norm();
    return s;
  }

  // Coarse loop: C-PSD -> gimbal, every gimbal_divider ticks.
  const int divider = cfg.gimbal_divider();
  const bool gimbal_tick = (state.tick % divider) == 0;
  if (gimbal_tick) {
    const double dt_g = dt_s * divider;
    const Eigen::Vector2d reading = clip_to_fov(
        coarse_error + cfg.coarse_noise_rad * noise.coarse, cfg.coarse_fov_rad);
    s.coarse_meas_rad = reading;
    Eigen::Vector2d rate;
    for (int axis = 0; axis < 2; ++axis) {
      rate[axis] = pi_axis(reading[axis], cfg.gimbal_gains, dt_g,
                           cfg.gimbal_rate_limit_rad_s, s.gimbal_integrator[axis]);
    }
    s.gimbal_rad += rate * dt_g;

    // Handover dwell counts consecutive coarse updates inside the fine FOV.
    if (s.mode == Mode::kCoarseTrack) {
      s.dwell_count = reading.norm() < cfg.fine_fov_rad ? s.dwell_count + 1 : 0;
    }
  }

  if (s.mode == Mode::kCoarseTrack && cfg.fine_loop_enabled &&
      s.dwell_count >= cfg.handover_dwell_steps) {
    s.mode = Mode::kFineTrack;
    s.dwell_count = 0;
    reset_fine_loop(s);
  }

  // Fine loop: F-PSD -> FPM, every tick while the fine stage is engaged.
  if (s.mode == Mode::kFineTrack || s.mode == Mode::kLinked) {
    const Eigen::Vector2d fine_error = true_target_rad - s.gimbal_rad - s.fpm_rad;
    if (fine_error.norm() > cfg.fine_fov_rad) {
      // Spot left the fine detector; drop back to the coarse stage.
      s.mode = state.mode == Mode::kLinked ? Mode::kFineTrack : Mode::kCoarseTrack;
      reset_fine_loop(s);
      s.dwell_count = 0;
    } else {
      const Eigen::Vector2d reading =
          clip_to_fov(fine_error + cfg.fine_noise_rad * noise.fine, cfg.fine_fov_rad);
      s.fine_meas_rad = reading;
      for (int axis = 0; axis < 2; ++axis) {
        double command = cfg.fpm_gains.kp * reading[axis] + s.fpm_integrator[axis];
        double next = s.fpm_rad[axis] + command * dt_s;
        const bool saturated = std::abs(next) > cfg.fpm_range_rad;
        if (!saturated) {
          s.fpm_integrator[axis] += cfg.fpm_gains.ki * reading[axis] * dt_s;
        }
        s.fpm_rad[axis] = clamp_abs(next, cfg.fpm_range_rad);
      }
    }
  }

  s.residual_rad = (true_target_rad - s.gimbal_rad - s.fpm_rad).norm();

  // LINKED gate: residual RMS over 1-s blocks of fine-stage ticks.
  if (s.mode == Mode::kFineTrack || s.mode == Mode::kLinked) {
    s.rms_accum_rad2 += s.residual_rad * s.residual_rad;
    s.rms_count += 1;
    if (s.rms_count >= static_cast<int>(cfg.fpm_rate_hz)) {
      const double rms = std::sqrt(s.rms_accum_rad2 / s.rms_count);
      s.rms_accum_rad2 = 0.0;
      s.rms_count = 0;
      if (s.mode == Mode::kFineTrack && rms < cfg.link_rms_threshold_rad) {
        s.mode = Mode::kLinked;
      } else if (s.mode == Mode::kLinked && rms >= cfg.link_rms_threshold_rad) {
        s.mode = Mode::kFineTrack;
      }
    }
  }
  return s;
}

void DisturbanceModel::validate() const {
  if (random_walk_rad_sqrt_s < 0.0)
    throw ConfigError("disturbance random_walk_rad_sqrt_s must be >= 0");
  for (const auto& sine : sinusoids) {
    if (sine.amplitude_rad < 0.0 || sine.frequency_hz < 0.0)
      throw ConfigError("disturbance sinusoid amplitude and frequency must be >= 0");
  }
}

PatTimeSeries run(const TargetTrack& track, const PatConfig& cfg,
                  const DisturbanceModel& disturbance, std::uint64_t seed,
                  double duration_s, double dt_s, double tx_divergence_rad) {
  cfg.validate();
  disturbance.validate();
  if (duration_s <= 0.0) throw ConfigError("pat run duration_s must be > 0");
  check_dt(cfg, dt_s);

  std::uint64_t mix = seed;
  std::mt19937_64 noise_engine(rng::splitmix64(mix));
  std::mt19937_64 walk_engine(disturbance.seed);

  PatState state;
  PatTimeSeries series;
  series.dt_s = dt_s;
  const auto ticks = static_cast<std::uint64_t>(std::llround(duration_s / dt_s));
  series.samples.reserve(ticks + 1);

  Eigen::Vector2d walk = Eigen::Vector2d::Zero();
  const auto emit = [&](double t, const PatState& s) {
    series.samples.push_back(
        {t, s.mode, s.gimbal_rad, s.fpm_rad, s.pam_rad, s.residual_rad,
         optics::pointing_loss_db(s.residual_rad, tx_divergence_rad)});
  };
  emit(0.0, state);

  for (std::uint64_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt_s;
    // Sensor noise and the random walk advance every tick so paired runs
    // (e.g. fine loop on/off) consume identical streams.
    SensorNoise noise;
    noise.coarse = {rng::normal(noise_engine), rng::normal(noise_engine)};
    noise.fine = {rng::normal(noise_engine), rng::normal(noise_engine)};
    if (disturbance.random_walk_rad_sqrt_s > 0.0) {
      const double scale = disturbance.random_walk_rad_sqrt_s * std::sqrt(dt_s);
      walk += Eigen::Vector2d(scale * rng::normal(walk_engine),
                              scale * rng::normal(walk_engine));
    }
    Eigen::Vector2d jitter = disturbance.bias_rad + walk;
    for (const auto& sine : disturbance.sinusoids) {
      const double value = sine.amplitude_rad *
          std::sin(2.0 * kPi * sine.frequency_hz * t + sine.phase_rad);
      jitter += value * Eigen::Vector2d(std::cos(sine.axis_rad),
                                        std::sin(sine.axis_rad));
    }

    const TargetSample sample = track(t);
    const Eigen::Vector2d target = sample.los_rad + jitter;

    if (state.mode == Mode::kIdle || state.mode == Mode::kLost) {
      enter_acquire(state);
      state.tick += 1;
      state.residual_rad = (target - state.gimbal_rad - state.fpm_rad).norm();
    } else if (state.mode == Mode::kAcquire) {
      state = acquire_step(state, cfg, target, sample.beacon_power_dbm, dt_s);
    } else {
      state = track_step(state, cfg, target, sample.point_ahead_rad, dt_s, noise);
    }
    emit(static_cast<double>(k + 1) * dt_s, state);
  }
  return series;
}

std::vector<std::pair<Mode, Mode>> mode_graph() {
  std::vector<std::pair<Mode, Mode>> edges = {
      {Mode::kIdle, Mode::kAcquire},
      {Mode::kAcquire, Mode::kCoarseTrack},
      {Mode::kCoarseTrack, Mode::kFineTrack},
      {Mode::kFineTrack, Mode::kLinked},
      {Mode::kLinked, Mode::kFineTrack},
      {Mode::kFineTrack, Mode::kCoarseTrack},
      {Mode::kLost, Mode::kAcquire},
  };
  for (Mode from : {Mode::kIdle, Mode::kAcquire, Mode::kCoarseTrack,
                    Mode::kFineTrack, Mode::kLinked}) {
    edges.emplace_back(from, Mode::kLost);
  }
  return edges;
}

bool transition_allowed(Mode from, Mode to) {
  if (from == to) return true;
  const auto edges = mode_graph();
  return std::find(edges.begin(), edges.end(), std::make_pair(from, to)) !=
         edges.end();
}

}  // namespace lasertwin::pat

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace lasertwin::pat {

enum class Mode : std::uint8_t {
  kIdle,
  kAcquire,
  kCoarseTrack,
  kFineTrack,
  kLinked,
  kLost,
};

const char* mode_name(Mode mode);

struct PiGains {
  double kp = 0.0;  // [1/s] proportional rate command per radian of error
  double ki = 0.0;  // [1/s^2]
};

/// Tuning of the two nested tracking loops plus acquisition parameters.
///
/// The paper names the loops (wide-FOV detector -> 2-axis gimbal, fine PSD
/// -> fine-pointing mirror) but none of the numbers; every default below is
/// an assumption knob. The default gains place the gimbal loop near 2 Hz and
/// the FPM loop near 30 Hz, both with damping 0.9.
struct PatConfig {
  double coarse_fov_rad = 0.04363323129985824;  // 2.5 deg half-angle
  double fine_fov_rad = 1e-3;                   // half-angle
  double gimbal_rate_limit_rad_s = 0.35;
  double gimbal_rate_hz = 100.0;
  PiGains gimbal_gains{22.62, 158.0};
  double fpm_range_rad = 2e-3;  // +- per axis
  double fpm_rate_hz = 1000.0;
  PiGains fpm_gains{339.3, 35530.6};
  double coarse_noise_rad = 10e-6;  // C-PSD additive sigma per axis
  double fine_noise_rad = 1e-6;     // F-PSD additive sigma per axis
  int handover_dwell_steps = 50;    // consecutive coarse-loop updates
  double beacon_threshold_dbm = -90.0;
  double link_rms_threshold_rad = 5e-6;  // 1 s residual RMS gate for LINKED
  double uncertainty_cone_rad = 0.08726646259971647;  // 5 deg half-angle
  double spiral_pitch_factor = 0.8;  // radial pitch as fraction of coarse FOV
  bool fine_loop_enabled = true;

  void validate() const;   // throws ConfigError
  int gimbal_divider() const;  // FPM ticks per gimbal update
  double tick_dt_s() const { return 1.0 / fpm_rate_hz; }
};

/// Full controller state. All angles are small-angle (az, el) offsets in the
/// terminal's local frame. The PAM command offsets the transmit beam only
/// and never enters the receive-error computation.
struct PatState {
  Mode mode = Mode::kIdle;
  std::uint64_t tick = 0;
  Eigen::Vector2d gimbal_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d fpm_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d pam_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d coarse_meas_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d fine_meas_rad = Eigen::Vector2d::Zero();
  double residual_rad = 0.0;  // |true boresight error| after corrections
  Eigen::Vector2d gimbal_integrator = Eigen::Vector2d::Zero();
  Eigen::Vector2d fpm_integrator = Eigen::Vector2d::Zero();
  // Spiral scan progress
  Eigen::Vector2d spiral_center_rad = Eigen::Vector2d::Zero();
  double spiral_angle_rad = 0.0;
  // Handover bookkeeping
  int dwell_count = 0;
  double rms_accum_rad2 = 0.0;
  int rms_count = 0;
};

/// Unit-normal sensor noise draws for one tick; scaled by the configured
/// sigmas inside the step functions.
struct SensorNoise {
  Eigen::Vector2d coarse = Eigen::Vector2d::Zero();
  Eigen::Vector2d fine = Eigen::Vector2d::Zero();
};

/// One spiral-scan step. The gimbal sweeps an Archimedean spiral over the
/// uncertainty cone (radial pitch <= spiral_pitch_factor * coarse FOV, so
/// coverage is guaranteed) and hands over to COARSE_TRACK once the true
/// error is inside the coarse FOV and the beacon is above threshold.
PatState acquire_step(const PatState& state, const PatConfig& cfg,
                      const Eigen::Vector2d& true_target_rad,
                      double beacon_power_dbm, double dt_s);

/// One closed-loop tracking tick: C-PSD -> gimbal PI (rate-limited, at the
/// gimbal divider), F-PSD -> FPM PI (range-saturated with clamped
/// integrator), PAM pass-through, mode handovers.
PatState track_step(const PatState& state, const PatConfig& cfg,
                    const Eigen::Vector2d& true_target_rad,
                    const Eigen::Vector2d& pam_command_rad, double dt_s,
                    const SensorNoise& noise = {});

/// Platform jitter: bias + sinusoids + seeded random walk.
struct SinusoidSpec {
  double amplitude_rad = 0.0;
  double frequency_hz = 0.0;
  double phase_rad = 0.0;
  double axis_rad = 0.0;  // direction of the jitter axis in the (x, y) plane
};

struct DisturbanceModel {
  Eigen::Vector2d bias_rad = Eigen::Vector2d::Zero();
  double random_walk_rad_sqrt_s = 0.0;
  std::vector<SinusoidSpec> sinusoids;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

/// What the terminal is asked to do at time t: where the counter-terminal
/// truly is (local angles), how strong its beacon arrives, and the
/// point-ahead command for the PAM.
struct TargetSample {
  Eigen::Vector2d los_rad = Eigen::Vector2d::Zero();
  double beacon_power_dbm = 0.0;
  Eigen::Vector2d point_ahead_rad = Eigen::Vector2d::Zero();
};

using TargetTrack = std::function<TargetSample(double t_s)>;

struct PatSample {
  double t_s = 0.0;
  Mode mode = Mode::kIdle;
  Eigen::Vector2d gimbal_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d fpm_rad = Eigen::Vector2d::Zero();
  Eigen::Vector2d pam_rad = Eigen::Vector2d::Zero();
  double residual_rad = 0.0;
  double pointing_loss_db = 0.0;
};

struct PatTimeSeries {
  double dt_s = 0.0;
  std::vector<PatSample> samples;  // initial state plus one entry per tick
};

/// Deterministic closed-loop run: identical (track, cfg, disturbance, seed)
/// give identical output. dt must equal 1 / fpm_rate_hz. The per-sample
/// pointing loss uses the supplied transmit divergence.
PatTimeSeries run(const TargetTrack& track, const PatConfig& cfg,
                  const DisturbanceModel& disturbance, std::uint64_t seed,
                  double duration_s, double dt_s, double tx_divergence_rad);

/// The exact allowed mode-transition set.
std::vector<std::pair<Mode, Mode>> mode_graph();

bool transition_allowed(Mode from, Mode to);

}  // namespace lasertwin::pat

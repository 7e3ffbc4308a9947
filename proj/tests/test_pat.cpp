#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/pat.hpp"

using namespace lasertwin;
using namespace lasertwin::pat;
using constants::deg_to_rad;

namespace {

PatConfig quiet_config() {
  PatConfig cfg;
  cfg.coarse_noise_rad = 0.0;
  cfg.fine_noise_rad = 0.0;
  return cfg;
}

TargetTrack static_target(double x_rad, double beacon_dbm = -40.0,
                          Eigen::Vector2d pam = Eigen::Vector2d::Zero()) {
  return [x_rad, beacon_dbm, pam](double) {
    TargetSample sample;
    sample.los_rad = {x_rad, 0.0};
    sample.beacon_power_dbm = beacon_dbm;
    sample.point_ahead_rad = pam;
    return sample;
  };
}

}  // namespace

TEST_CASE("config validation enforces the documented invariants") {
  PatConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.fine_fov_rad = cfg.coarse_fov_rad + 0.01;
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       "fine detector FOV must be smaller than coarse FOV",
                       ConfigError);
  cfg = {};
  cfg.gimbal_rate_hz = 300.0;  // 1000/300 is not an integer divider
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.fpm_rate_hz = 50.0;  // below the gimbal rate
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("steps reject a dt that mismatches the loop rate") {
  const PatConfig cfg = quiet_config();
  PatState state;
  state.mode = Mode::kCoarseTrack;
  CHECK_THROWS_AS(
      track_step(state, cfg, {0.0, 0.0}, {0.0, 0.0}, 0.9 / cfg.fpm_rate_hz),
      ConfigError);
  state.mode = Mode::kAcquire;
  CHECK_THROWS_AS(acquire_step(state, cfg, {0.0, 0.0}, 0.0, 0.002), ConfigError);
}

TEST_CASE("acquisition detects an on-axis beacon in one step") {
  const PatConfig cfg = quiet_config();
  PatState state;
  state.mode = Mode::kAcquire;
  const PatState next =
      acquire_step(state, cfg, {0.0, 0.0}, cfg.beacon_threshold_dbm + 10.0,
                   cfg.tick_dt_s());
  CHECK(next.mode == Mode::kCoarseTrack);
}

TEST_CASE("spiral coverage finds a 5 deg offset target within one sweep") {
  PatConfig cfg = quiet_config();
  cfg.uncertainty_cone_rad = deg_to_rad(10.0);
  PatState state;
  state.mode = Mode::kAcquire;
  const Eigen::Vector2d target{deg_to_rad(5.0) * std::cos(1.0),
                               deg_to_rad(5.0) * std::sin(1.0)};

  // Step bound from the closed-form Archimedean arc length
  // s(phi) = b/2 (phi sqrt(1+phi^2) + asinh(phi)) out to the cone edge.
  const double pitch = cfg.spiral_pitch_factor * cfg.coarse_fov_rad;
  const double b = pitch / (2.0 * constants::kPi);
  const double phi_max = cfg.uncertainty_cone_rad / b;
  const double arc_total =
      0.5 * b * (phi_max * std::sqrt(1.0 + phi_max * phi_max) + std::asinh(phi_max));
  const double arc_per_step = cfg.gimbal_rate_limit_rad_s * cfg.tick_dt_s();
  const auto bound = static_cast<long>(std::ceil(arc_total / arc_per_step));

  long steps = 0;
  while (state.mode == Mode::kAcquire && steps <= bound) {
    state = acquire_step(state, cfg, target, -40.0, cfg.tick_dt_s());
    ++steps;
  }
  CHECK(state.mode == Mode::kCoarseTrack);
  CHECK(steps <= bound);
}

TEST_CASE("acquisition never hands over while the beacon stays dark") {
  PatConfig cfg = quiet_config();
  PatState state;
  state.mode = Mode::kAcquire;
  for (int i = 0; i < 20000; ++i) {
    state = acquire_step(state, cfg, {1e-6, 0.0}, -200.0, cfg.tick_dt_s());
    CHECK(state.mode == Mode::kAcquire);
  }
}

TEST_CASE("spiral respects the gimbal rate limit, including the fold-back") {
  PatConfig cfg = quiet_config();
  cfg.uncertainty_cone_rad = deg_to_rad(2.0);  // small cone folds quickly
  PatState state;
  state.mode = Mode::kAcquire;
  Eigen::Vector2d prev = state.gimbal_rad;
  const double max_step = cfg.gimbal_rate_limit_rad_s * cfg.tick_dt_s() + 1e-12;
  for (int i = 0; i < 300000; ++i) {
    state = acquire_step(state, cfg, {1.0, 1.0}, -200.0, cfg.tick_dt_s());
    CHECK((state.gimbal_rad - prev).norm() <= max_step);
    prev = state.gimbal_rad;
  }
}

TEST_CASE("zero-noise track settles a 1 deg offset below 1 urad in 10 s") {
  const PatConfig cfg = quiet_config();
  DisturbanceModel disturbance;
  disturbance.bias_rad = {deg_to_rad(1.0), 0.0};
  const auto series = run(static_target(0.0), cfg, disturbance, 3, 12.0,
                          cfg.tick_dt_s(), 17.2e-6);

  // Residual at 10 s is sub-urad and the tail never grows back.
  const auto at = [&](double t) {
    return series.samples[static_cast<std::size_t>(t * cfg.fpm_rate_hz)];
  };
  CHECK(at(10.0).residual_rad < 1e-6);
  double prev = at(1.0).residual_rad;
  for (double t = 1.5; t <= 12.0; t += 0.5) {
    const double r = at(t).residual_rad;
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
  // And the loop ends LINKED.
  CHECK(series.samples.back().mode == Mode::kLinked);
}

TEST_CASE("FPM saturates exactly at its range without windup") {
  PatConfig cfg = quiet_config();
  cfg.fine_fov_rad = 20e-3;  // keep the fine stage engaged at mrad errors
  PatState state;
  state.mode = Mode::kFineTrack;
  state.tick = 1;  // off the gimbal divider so only the FPM acts

  const double dt = cfg.tick_dt_s();
  const auto drive = [&](double target, int ticks) {
    for (int i = 0; i < ticks; ++i) {
      state = track_step(state, cfg, {target, 0.0}, {0.0, 0.0}, dt);
      state.tick = 1 + (state.tick % 2);  // stay off the divider
      CHECK(std::abs(state.fpm_rad.x()) <= cfg.fpm_range_rad);
    }
  };
  drive(5e-3, 8);
  CHECK(state.fpm_rad.x() == cfg.fpm_range_rad);  // railed exactly at range

  // No windup: the mirror releases from the rail within a few ticks.
  drive(-5e-3, 4);
  CHECK(state.fpm_rad.x() == -cfg.fpm_range_rad);
}

TEST_CASE("point-ahead commands never touch the receive residual") {
  PatConfig cfg;  // noise on, to exercise the full path
  DisturbanceModel disturbance;
  disturbance.sinusoids.push_back({50e-6, 3.0, 0.4, 0.7});
  disturbance.random_walk_rad_sqrt_s = 2e-6;

  const auto with_pam =
      run(static_target(0.0, -40.0, {50e-6, -20e-6}), cfg, disturbance, 11, 5.0,
          cfg.tick_dt_s(), 17.2e-6);
  const auto without_pam = run(static_target(0.0, -40.0, {0.0, 0.0}), cfg,
                               disturbance, 11, 5.0, cfg.tick_dt_s(), 17.2e-6);
  REQUIRE(with_pam.samples.size() == without_pam.samples.size());
  for (std::size_t i = 0; i < with_pam.samples.size(); ++i) {
    CHECK(with_pam.samples[i].residual_rad == without_pam.samples[i].residual_rad);
    CHECK(with_pam.samples[i].gimbal_rad == without_pam.samples[i].gimbal_rad);
    CHECK(with_pam.samples[i].fpm_rad == without_pam.samples[i].fpm_rad);
  }
  CHECK(with_pam.samples.back().pam_rad.x() == 50e-6);
  CHECK(without_pam.samples.back().pam_rad.x() == 0.0);
}

TEST_CASE("seeded runs are reproducible sample for sample") {
  PatConfig cfg;
  DisturbanceModel disturbance;
  disturbance.random_walk_rad_sqrt_s = 5e-6;
  disturbance.sinusoids.push_back({80e-6, 12.0, 0.0, 0.0});
  const auto first =
      run(static_target(1e-4), cfg, disturbance, 77, 3.0, cfg.tick_dt_s(), 17.2e-6);
  const auto second =
      run(static_target(1e-4), cfg, disturbance, 77, 3.0, cfg.tick_dt_s(), 17.2e-6);
  REQUIRE(first.samples.size() == second.samples.size());
  for (std::size_t i = 0; i < first.samples.size(); ++i) {
    CHECK(first.samples[i].residual_rad == second.samples[i].residual_rad);
    CHECK(first.samples[i].gimbal_rad == second.samples[i].gimbal_rad);
    CHECK(first.samples[i].fpm_rad == second.samples[i].fpm_rad);
    CHECK(first.samples[i].mode == second.samples[i].mode);
  }
}

TEST_CASE("mode graph contents") {
  const auto edges = mode_graph();
  const auto has = [&](Mode from, Mode to) {
    return std::find(edges.begin(), edges.end(), std::make_pair(from, to)) !=
           edges.end();
  };
  CHECK_FALSE(has(Mode::kAcquire, Mode::kLinked));  // no direct shortcut
  CHECK(has(Mode::kLost, Mode::kAcquire));
  CHECK(has(Mode::kIdle, Mode::kAcquire));
  CHECK(has(Mode::kLinked, Mode::kFineTrack));
  CHECK(has(Mode::kFineTrack, Mode::kCoarseTrack));
  for (Mode from : {Mode::kIdle, Mode::kAcquire, Mode::kCoarseTrack,
                    Mode::kFineTrack, Mode::kLinked}) {
    CHECK(has(from, Mode::kLost));
  }
}

TEST_CASE("every transition observed in a stressed run is graph-legal") {
  PatConfig cfg;
  cfg.coarse_noise_rad = 30e-6;
  cfg.fine_noise_rad = 2e-6;
  DisturbanceModel disturbance;
  disturbance.random_walk_rad_sqrt_s = 50e-6;  // wanders enough to lose lock
  disturbance.sinusoids.push_back({300e-6, 7.0, 0.0, 0.3});
  const auto series =
      run(static_target(5e-3), cfg, disturbance, 1234, 60.0, cfg.tick_dt_s(), 17.2e-6);

  std::set<std::pair<Mode, Mode>> seen;
  for (std::size_t i = 1; i < series.samples.size(); ++i) {
    const Mode prev = series.samples[i - 1].mode;
    const Mode curr = series.samples[i].mode;
    if (prev != curr) seen.insert({prev, curr});
    CHECK(transition_allowed(prev, curr));
  }
  CHECK(seen.count({Mode::kIdle, Mode::kAcquire}) == 1);
  CHECK(seen.count({Mode::kAcquire, Mode::kCoarseTrack}) == 1);

  // LOST is always followed by ACQUIRE.
  for (std::size_t i = 1; i + 1 < series.samples.size(); ++i) {
    if (series.samples[i].mode == Mode::kLost) {
      CHECK(series.samples[i + 1].mode == Mode::kAcquire);
    }
  }
}

TEST_CASE("coarse-fine handover cannot oscillate within a dwell window") {
  PatConfig cfg;
  cfg.coarse_noise_rad = 100e-6;
  cfg.fine_noise_rad = 5e-6;
  DisturbanceModel disturbance;
  disturbance.random_walk_rad_sqrt_s = 150e-6;
  const auto series =
      run(static_target(0.0), cfg, disturbance, 321, 120.0, cfg.tick_dt_s(), 17.2e-6);

  const int divider = cfg.gimbal_divider();
  long last_entry = -1;
  for (std::size_t i = 1; i < series.samples.size(); ++i) {
    if (series.samples[i].mode == Mode::kFineTrack &&
        series.samples[i - 1].mode == Mode::kCoarseTrack) {
      if (last_entry >= 0) {
        CHECK(static_cast<long>(i) - last_entry >=
              cfg.handover_dwell_steps * divider);
      }
      last_entry = static_cast<long>(i);
    }
  }
}

TEST_CASE("commands stay inside their configured limits at every step") {
  PatConfig cfg;
  DisturbanceModel disturbance;
  disturbance.sinusoids.push_back({3e-3, 30.0, 0.0, 0.0});  // rails the FPM
  disturbance.random_walk_rad_sqrt_s = 20e-6;
  PatConfig wide = cfg;
  wide.fine_fov_rad = 20e-3;
  const auto series =
      run(static_target(0.0), wide, disturbance, 55, 20.0, wide.tick_dt_s(), 17.2e-6);

  const double max_gimbal_step =
      wide.gimbal_rate_limit_rad_s * wide.tick_dt_s() * wide.gimbal_divider();
  for (std::size_t i = 1; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    CHECK(std::abs(s.fpm_rad.x()) <= wide.fpm_range_rad);
    CHECK(std::abs(s.fpm_rad.y()) <= wide.fpm_range_rad);
    CHECK((s.gimbal_rad - series.samples[i - 1].gimbal_rad).norm() <=
          max_gimbal_step * std::sqrt(2.0) + 1e-12);
  }
}

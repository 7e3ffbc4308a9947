#pragma once

namespace lasertwin::amplifier {

/// First-order thermal model of the 2-stage space EDFA.
///
/// The case temperature relaxes exponentially toward t_env + delta_t_ss and
/// output power declines linearly with temperature above the reference,
/// clamped at zero:
///
///   T(t+dt) = T_target + (T(t) - T_target) * exp(-dt/tau)
///   P       = max(0, initial_power_w - slope_w_per_degc * (T - t_ref_degc))
///
/// The TVAC curve behind this model is not published numerically; tau,
/// delta_t_ss and the reference temperatures are assumption defaults, and the
/// slope is normally obtained from calibrate() against the two hard numbers
/// the device provides (2.5 W at start of pass, >= 2 W six minutes in).
struct EdfaModel {
  double initial_power_w = 2.5;
  double slope_w_per_degc = 0.0;   // power lost per degC above t_ref
  double tau_s = 1200.0;           // thermal time constant
  double delta_t_ss_degc = 20.0;   // steady-state self-heating rise
  double t_ref_degc = 25.0;
  double t_env_degc = 25.0;

  void validate() const;  // throws ConfigError

  double power_at_temperature(double temp_degc) const;
};

struct EdfaState {
  double time_s = 0.0;
  double temperature_degc = 25.0;
  double power_w = 2.5;
};

/// Initial state at the given case temperature.
EdfaState initial_state(const EdfaModel& model, double start_temp_degc);

/// Advance the thermal state by dt using the exact exponential update, so
/// composing steps is associative to rounding (no Euler drift).
EdfaState step(const EdfaModel& model, const EdfaState& state, double dt_s);

/// Minimum output power over [0, duration] starting from start_temp_degc,
/// stepped at <= 1 s resolution.
double guarantee(const EdfaModel& model, double start_temp_degc,
                 double duration_s);

struct CalibrationConstraints {
  double initial_power_w = 2.5;  // P(0)
  double t1_s = 360.0;           // constraint time
  double min_power_w = 2.0;      // P(t1) >= min_power_w
};

/// Which model parameters the calibrator may adjust. Exactly one is solved
/// (priority slope, then delta_t_ss, then tau); the rest keep base values.
struct FreeParameters {
  bool slope = true;
  bool delta_t_ss = false;
  bool tau = false;
};

struct CalibrationResult {
  EdfaModel model;
  double equality_margin_w = 0.0;  // P(t1) - min_power_w after the fit
  bool underdetermined = false;    // constraints hold for any free-param value
};

/// Fit the thermal model so the power trajectory starting at t_ref meets
/// P(0) = initial_power_w and P(t1) >= min_power_w, with equality when the
/// free parameter can reach it. Throws CalibrationError naming the violated
/// constraint when infeasible.
CalibrationResult calibrate(const CalibrationConstraints& constraints,
                            const EdfaModel& base,
                            const FreeParameters& free_params = {});

/// Default model calibrated to the standard constraints (2.5 W at start,
/// 2.0 W at 360 s).
EdfaModel calibrated_default();

}  // namespace lasertwin::amplifier

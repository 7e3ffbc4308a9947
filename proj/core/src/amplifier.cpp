#include "lasertwin/amplifier.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "lasertwin/errors.hpp"

namespace lasertwin::amplifier {

void EdfaModel::validate() const {
  if (initial_power_w <= 0.0) throw ConfigError("edfa initial_power_w must be > 0");
  if (tau_s <= 0.0) throw ConfigError("edfa tau_s must be > 0");
  if (slope_w_per_degc < 0.0) throw ConfigError("edfa slope_w_per_degc must be >= 0");
}

double EdfaModel::power_at_temperature(double temp_degc) const {
  return std::max(0.0, initial_power_w - slope_w_per_degc * (temp_degc - t_ref_degc));
}

EdfaState initial_state(const EdfaModel& model, double start_temp_degc) {
  return {0.0, start_temp_degc, model.power_at_temperature(start_temp_degc)};
}

EdfaState step(const EdfaModel& model, const EdfaState& state, double dt_s) {
  if (dt_s <= 0.0) throw ConfigError("edfa step dt_s must be > 0");
  const double t_target = model.t_env_degc + model.delta_t_ss_degc;
  const double temp =
      t_target + (state.temperature_degc - t_target) * std::exp(-dt_s / model.tau_s);
  return {state.time_s + dt_s, temp, model.power_at_temperature(temp)};
}

double guarantee(const EdfaModel& model, double start_temp_degc,
                 double duration_s) {
  if (duration_s <= 0.0) throw ConfigError("edfa guarantee duration_s must be > 0");
  EdfaState s = initial_state(model, start_temp_degc);
  double min_power = s.power_w;
  double t = 0.0;
  while (t < duration_s) {
    const double dt = std::min(1.0, duration_s - t);
    s = step(model, s, dt);
    min_power = std::min(min_power, s.power_w);
    t += dt;
  }
  // Heating runs are monotone, so the trajectory minimum is the endpoint.
  const double t_target = model.t_env_degc + model.delta_t_ss_degc;
  if (start_temp_degc <= t_target) {
    assert(std::abs(min_power - s.power_w) < 1e-9);
  }
  return min_power;
}

CalibrationResult calibrate(const CalibrationConstraints& constraints,
                            const EdfaModel& base,
                            const FreeParameters& free_params) {
  if (constraints.min_power_w > constraints.initial_power_w) {
    throw CalibrationError(
        "infeasible constraint: min_power_w exceeds initial_power_w");
  }
  if (constraints.t1_s <= 0.0) {
    throw CalibrationError("infeasible constraint: t1_s must be > 0");
  }

  EdfaModel model = base;
  model.initial_power_w = constraints.initial_power_w;

  // Trajectory starts at the reference temperature; the power drop at t1 is
  //   drop = slope * rise_total * (1 - exp(-t1/tau))
  // with rise_total = (t_env - t_ref) + delta_t_ss.
  const double target_drop = constraints.initial_power_w - constraints.min_power_w;
  const auto rise_total = [](const EdfaModel& m) {
    return (m.t_env_degc - m.t_ref_degc) + m.delta_t_ss_degc;
  };
  const auto relax = [&](double tau) {
    return 1.0 - std::exp(-constraints.t1_s / tau);
  };

  if (free_params.slope) {
    const double denom = rise_total(model) * relax(model.tau_s);
    if (denom <= 0.0) {
      if (target_drop > 0.0) {
        throw CalibrationError(
            "infeasible constraint: temperature never rises above reference, "
            "cannot fit slope_w_per_degc");
      }
      model.slope_w_per_degc = 0.0;
    } else {
      model.slope_w_per_degc = target_drop / denom;
    }
    return {model, 0.0, false};
  }

  if (free_params.delta_t_ss && model.slope_w_per_degc > 0.0) {
    const double g = relax(model.tau_s);
    const double rise_needed = target_drop / (model.slope_w_per_degc * g);
    const double delta = rise_needed - (model.t_env_degc - model.t_ref_degc);
    if (delta < 0.0) {
      throw CalibrationError(
          "infeasible constraint: required delta_t_ss_degc is negative");
    }
    model.delta_t_ss_degc = delta;
    return {model, 0.0, false};
  }

  if (free_params.tau && model.slope_w_per_degc > 0.0 && rise_total(model) > 0.0) {
    const double g_needed =
        target_drop / (model.slope_w_per_degc * rise_total(model));
    if (g_needed >= 1.0 || g_needed <= 0.0) {
      throw CalibrationError(
          "infeasible constraint: no finite tau_s reaches min_power_w equality");
    }
    model.tau_s = -constraints.t1_s / std::log(1.0 - g_needed);
    return {model, 0.0, false};
  }

  // Nothing to fit: evaluate the fixed model and report feasibility.
  const double drop =
      model.slope_w_per_degc * rise_total(model) * relax(model.tau_s);
  const double p_t1 = std::max(0.0, constraints.initial_power_w - drop);
  const double margin = p_t1 - constraints.min_power_w;
  if (margin < 0.0) {
    throw CalibrationError(
        "infeasible constraint: fixed parameters violate min_power_w at t1");
  }
  // slope = 0 satisfies the constraint no matter what the free params are.
  const bool any_free = free_params.delta_t_ss || free_params.tau;
  return {model, margin, any_free && model.slope_w_per_degc == 0.0};
}

EdfaModel calibrated_default() {
  return calibrate(CalibrationConstraints{}, EdfaModel{}).model;
}

}  // namespace lasertwin::amplifier

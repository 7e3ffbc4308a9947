#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lasertwin/amplifier.hpp"
#include "lasertwin/geometry.hpp"
#include "lasertwin/link_budget.hpp"
#include "lasertwin/pat.hpp"

namespace lasertwin::scenario {

enum class ScenarioKind {
  kLeoGround,
  kLeoGeo,
  kGeoGround,
  kHapsGround,
  kDroneGround,
};

const char* scenario_kind_name(ScenarioKind kind);

enum class LinkDirection { kAToB, kBToA };

/// Transmit power source of one terminal: either a constant or the thermal
/// EDFA model (optionally with the slope solved from the calibration
/// constraints in the file).
struct PowerSource {
  bool use_edfa = false;
  double constant_power_w = 2.0;
  amplifier::EdfaModel edfa;
  bool calibrate_slope = true;
  amplifier::CalibrationConstraints constraints;
  double start_temp_degc = 25.0;
};

struct TerminalConfig {
  optics::TelescopeSpec telescope;
  PowerSource power;
  double coupling_base = 0.81;  // ideal single-mode coupling constant
};

struct BeaconConfig {
  optics::BeamModel beam{1e-3, 1.0};  // 1/e^2 half-angle [rad], power [W]
};

/// Complete description of one mission run. Produced by parse_scenario with
/// every defaulted field recorded in `provenance`.
struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::kGeoGround;
  geometry::EarthModel earth;
  geometry::PlatformSpec platform_a;
  geometry::PlatformSpec platform_b;
  TerminalConfig terminal_a;
  TerminalConfig terminal_b;
  link_budget::ChannelConfig channel;
  link_budget::ReceiverSpec receiver;
  LinkDirection direction = LinkDirection::kAToB;
  BeaconConfig beacon;
  bool pat_enabled = false;
  pat::PatConfig pat;
  pat::DisturbanceModel disturbance;
  double t_start_s = 0.0;
  double t_end_s = 600.0;
  double budget_step_s = 0.1;
  std::uint64_t seed = 1;
  double atmosphere_top_m = 15000.0;   // links entirely above this skip the atmosphere
  double edfa_warning_floor_w = 2.0;   // long-link thermal warning threshold
  double pass_min_elevation_rad = 0.08726646259971647;
  double pass_step_s = 1.0;

  std::vector<std::string> provenance;  // "key = value (default)" entries

  void validate() const;  // throws ConfigError naming the violated invariant
};

/// Parse the hierarchical key/value scenario grammar ([section] headers,
/// `key = value` lines, units in key names). Unknown keys are rejected with
/// their line number; missing keys take documented defaults and are recorded
/// in the provenance list. `fallback_name` is used when the file does not
/// set `name` (the CLI passes the file stem).
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& fallback_name = "scenario");

ScenarioConfig parse_scenario_file(const std::string& path);

/// Canonical serialization: every field written explicitly, so
/// serialize(parse(x)) reparses to an equal config.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace lasertwin::scenario

#include "lasertwin/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lasertwin/amplifier.hpp"
#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/optics.hpp"

namespace lasertwin::sim {

namespace {

using scenario::LinkDirection;
using scenario::ScenarioConfig;
using scenario::ScenarioKind;
using scenario::TerminalConfig;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

/// Small-angle (x, y) chart around a reference boresight direction.
struct LocalFrame {
  Eigen::Vector3d boresight;
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;

  static LocalFrame around(const Eigen::Vector3d& direction) {
    LocalFrame frame;
    frame.boresight = direction.normalized();
    const Eigen::Vector3d helper =
        std::abs(frame.boresight.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                            : Eigen::Vector3d::UnitX();
    frame.e1 = frame.boresight.cross(helper).normalized();
    frame.e2 = frame.boresight.cross(frame.e1);
    return frame;
  }

  Eigen::Vector2d angles_of(const Eigen::Vector3d& direction) const {
    return {std::atan2(direction.dot(e1), direction.dot(boresight)),
            std::atan2(direction.dot(e2), direction.dot(boresight))};
  }

  Eigen::Vector2d project(const Eigen::Vector3d& transverse) const {
    return {transverse.dot(e1), transverse.dot(e2)};
  }
};

struct LinkEnds {
  const geometry::PlatformSpec* tx_platform;
  const geometry::PlatformSpec* rx_platform;
  const TerminalConfig* tx_terminal;
  const TerminalConfig* rx_terminal;
};

LinkEnds link_ends(const ScenarioConfig& cfg) {
  if (cfg.direction == LinkDirection::kAToB) {
    return {&cfg.platform_a, &cfg.platform_b, &cfg.terminal_a, &cfg.terminal_b};
  }
  return {&cfg.platform_b, &cfg.platform_a, &cfg.terminal_b, &cfg.terminal_a};
}

amplifier::EdfaModel resolve_edfa(const scenario::PowerSource& power) {
  if (!power.calibrate_slope) return power.edfa;
  return amplifier::calibrate(power.constraints, power.edfa).model;
}

bool crosses_atmosphere(const ScenarioConfig& cfg,
                        const geometry::PlatformState& a,
                        const geometry::PlatformState& b) {
  const double alt_a = a.position_m.norm() - constants::kEarthRadius;
  const double alt_b = b.position_m.norm() - constants::kEarthRadius;
  return std::min(alt_a, alt_b) < cfg.atmosphere_top_m;
}

/// Per-tick truth for the PAT chain: counter-terminal direction in the
/// local frame, beacon power and the point-ahead command.
pat::TargetTrack make_target_track(const ScenarioConfig& cfg,
                                   const LinkEnds& ends,
                                   const LocalFrame& frame) {
  return [&cfg, ends, frame](double t) {
    const auto tx = geometry::propagate(*ends.tx_platform, t, cfg.earth);
    const auto rx = geometry::propagate(*ends.rx_platform, t, cfg.earth);
    const auto link = geometry::link_geometry(tx, rx);

    pat::TargetSample sample;
    sample.los_rad = frame.angles_of(link.line_of_sight);
    sample.point_ahead_rad =
        link.point_ahead_rad * frame.project(link.point_ahead_direction);

    link_budget::BeaconLedgerInputs beacon;
    beacon.beam = cfg.beacon.beam;
    beacon.tx_path_efficiency = ends.rx_terminal->telescope.throughput;
    beacon.rx_aperture_m = ends.tx_terminal->telescope.aperture_m;
    beacon.rx_path_efficiency = ends.tx_terminal->telescope.throughput;
    beacon.wavelength_m = ends.tx_terminal->telescope.wavelength_m;
    beacon.range_m = link.range_m;
    beacon.elevation_rad = link.elevation_rad;
    beacon.crosses_atmosphere = crosses_atmosphere(cfg, tx, rx);
    beacon.detection_threshold_dbm = cfg.pat.beacon_threshold_dbm;
    const auto report = link_budget::beacon_budget(beacon, cfg.channel);
    sample.beacon_power_dbm = report.available
                                  ? report.received_dbm
                                  : -std::numeric_limits<double>::infinity();
    if (geometry::earth_blocked(tx.position_m, rx.position_m)) {
      sample.beacon_power_dbm = -std::numeric_limits<double>::infinity();
    }
    return sample;
  };
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return kNaN;
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<geometry::PassWindow> scenario_passes(const ScenarioConfig& cfg) {
  const geometry::PlatformSpec* orbit = nullptr;
  const geometry::PlatformSpec* site = nullptr;
  for (const auto* p : {&cfg.platform_a, &cfg.platform_b}) {
    if (p->kind == geometry::PlatformKind::kLeoCircular) orbit = p;
    if (p->kind == geometry::PlatformKind::kGroundSite ||
        p->kind == geometry::PlatformKind::kHaps)
      site = p;
  }
  if (orbit == nullptr || site == nullptr) return {};
  return geometry::predict_passes(*orbit, *site, cfg.pass_min_elevation_rad,
                                  cfg.t_start_s, cfg.t_end_s, cfg.pass_step_s,
                                  cfg.earth);
}

RunArtifacts run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const LinkEnds ends = link_ends(cfg);

  RunArtifacts artifacts;
  artifacts.pat_enabled = cfg.pat_enabled;
  artifacts.edfa_enabled = ends.tx_terminal->power.use_edfa;

  // Transmit power source.
  amplifier::EdfaModel edfa_model;
  amplifier::EdfaState edfa_state;
  if (artifacts.edfa_enabled) {
    edfa_model = resolve_edfa(ends.tx_terminal->power);
    edfa_state =
        amplifier::initial_state(edfa_model, ends.tx_terminal->power.start_temp_degc);
  }

  // PAT chain at the transmit terminal, full rate over the whole window.
  pat::PatTimeSeries pat_series;
  const double duration = cfg.t_end_s - cfg.t_start_s;
  if (cfg.pat_enabled) {
    const auto tx0 = geometry::propagate(*ends.tx_platform, cfg.t_start_s, cfg.earth);
    const auto rx0 = geometry::propagate(*ends.rx_platform, cfg.t_start_s, cfg.earth);
    const auto link0 = geometry::link_geometry(tx0, rx0);
    const LocalFrame frame = LocalFrame::around(link0.line_of_sight);
    const auto track = make_target_track(cfg, ends, frame);
    const auto shifted = [&track, &cfg](double t) {
      return track(cfg.t_start_s + t);
    };
    pat_series =
        pat::run(shifted, cfg.pat, cfg.disturbance, cfg.seed, duration,
                 cfg.pat.tick_dt_s(), optics::divergence(ends.tx_terminal->telescope));
  }

  const auto steps =
      static_cast<std::size_t>(duration / cfg.budget_step_s + 1e-9);
  artifacts.rows.reserve(steps + 1);

  std::vector<double> margins;
  std::vector<double> linked_residuals;
  bool reached_link = false;
  double time_to_linked = kNaN;
  double edfa_min = std::numeric_limits<double>::infinity();
  std::size_t available_count = 0;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = cfg.t_start_s + static_cast<double>(k) * cfg.budget_step_s;
    try {
      const auto tx = geometry::propagate(*ends.tx_platform, t, cfg.earth);
      const auto rx = geometry::propagate(*ends.rx_platform, t, cfg.earth);
      const auto link = geometry::link_geometry(tx, rx);

      BudgetSample row;
      row.t_s = t;
      row.range_m = link.range_m;
      row.elevation_rad = link.elevation_rad;
      row.alpha_rad = link.point_ahead_rad;
      row.edfa_w = kNaN;
      row.residual_rad = kNaN;

      double tx_power = ends.tx_terminal->power.constant_power_w;
      if (artifacts.edfa_enabled) {
        if (k > 0) edfa_state = amplifier::step(edfa_model, edfa_state, cfg.budget_step_s);
        row.edfa_w = edfa_state.power_w;
        tx_power = edfa_state.power_w;
        edfa_min = std::min(edfa_min, edfa_state.power_w);
      }

      double pointing_error = 0.0;
      if (cfg.pat_enabled) {
        const auto tick = static_cast<std::size_t>(
            std::llround((t - cfg.t_start_s) * cfg.pat.fpm_rate_hz));
        const pat::PatSample& ps = pat_series.samples.at(tick);
        row.residual_rad = ps.residual_rad;
        row.mode = ps.mode;
        pointing_error = ps.residual_rad;
        if (!reached_link && ps.mode == pat::Mode::kLinked) {
          reached_link = true;
          time_to_linked = t - cfg.t_start_s;
        }
        if (ps.mode == pat::Mode::kLinked) {
          linked_residuals.push_back(ps.residual_rad);
        }
      }
      row.pointing_loss_db = optics::pointing_loss_db(
          pointing_error, optics::divergence(ends.tx_terminal->telescope));

      if (geometry::earth_blocked(tx.position_m, rx.position_m)) {
        row.available = false;
        row.status = "earth_blocked";
        row.rx_dbm = kNaN;
        row.margin_db = kNaN;
      } else {
        link_budget::CommLedgerInputs inputs;
        inputs.tx_power_w = std::max(tx_power, 1e-12);
        inputs.tx_telescope = ends.tx_terminal->telescope;
        inputs.rx_telescope = ends.rx_terminal->telescope;
        inputs.coupling_base = ends.rx_terminal->coupling_base;
        inputs.pointing_error_rad = pointing_error;
        inputs.range_m = link.range_m;
        inputs.elevation_rad = link.elevation_rad;
        inputs.crosses_atmosphere = crosses_atmosphere(cfg, tx, rx);
        inputs.scintillation_db = link_budget::scintillation_draw_db(
            cfg.channel.scintillation_sigma, cfg.seed, t);
        const auto report = link_budget::comm_budget(inputs, cfg.channel, cfg.receiver);
        row.available = report.available;
        row.status = report.available ? "ok" : "below_min_elevation";
        row.rx_dbm = report.received_dbm;
        row.margin_db = report.margin_db;
        if (report.available) {
          margins.push_back(report.margin_db);
          if (report.margin_db >= 0.0) ++available_count;
        }
      }
      artifacts.rows.push_back(std::move(row));
    } catch (const Error& err) {
      throw Error("run_scenario step " + std::to_string(k) + " (t = " +
                  format_double(t) + " s): " + err.what());
    }
  }

  RunSummary& summary = artifacts.summary;
  summary.scenario_name = cfg.name;
  summary.scenario_kind = scenario::scenario_kind_name(cfg.kind);
  summary.seed = cfg.seed;
  summary.sample_count = artifacts.rows.size();
  summary.availability =
      static_cast<double>(available_count) / static_cast<double>(artifacts.rows.size());
  summary.has_margin = !margins.empty();
  if (summary.has_margin) {
    summary.margin.min_db = *std::min_element(margins.begin(), margins.end());
    summary.margin.max_db = *std::max_element(margins.begin(), margins.end());
    summary.margin.median_db = median_of(margins);
  } else {
    summary.margin = {kNaN, kNaN, kNaN};
  }
  summary.pat_enabled = cfg.pat_enabled;
  summary.reached_link = reached_link;
  summary.time_to_linked_s = time_to_linked;
  if (!linked_residuals.empty()) {
    double accum = 0.0;
    for (double r : linked_residuals) accum += r * r;
    summary.residual_rms_rad =
        std::sqrt(accum / static_cast<double>(linked_residuals.size()));
  } else {
    summary.residual_rms_rad = kNaN;
  }
  summary.edfa_enabled = artifacts.edfa_enabled;
  summary.edfa_min_power_w = artifacts.edfa_enabled ? edfa_min : kNaN;
  if (artifacts.edfa_enabled && edfa_min < cfg.edfa_warning_floor_w) {
    summary.warnings.push_back(
        "long-link thermal warning: EDFA minimum power " + format_double(edfa_min) +
        " W fell below the " + format_double(cfg.edfa_warning_floor_w) +
        " W guarantee over " + format_double(duration) +
        " s; longer links need additional heat transfer");
  }
  summary.passes = scenario_passes(cfg);
  summary.provenance = cfg.provenance;
  return artifacts;
}

link_budget::LinkBudgetReport budget_at(const ScenarioConfig& cfg, double t_s) {
  cfg.validate();
  if (t_s < cfg.t_start_s || t_s > cfg.t_end_s)
    throw ConfigError("budget_at time outside the scenario window");
  const LinkEnds ends = link_ends(cfg);

  const auto tx = geometry::propagate(*ends.tx_platform, t_s, cfg.earth);
  const auto rx = geometry::propagate(*ends.rx_platform, t_s, cfg.earth);
  const auto link = geometry::link_geometry(tx, rx);
  if (geometry::earth_blocked(tx.position_m, rx.position_m)) {
    return link_budget::unavailable_report("earth_blocked");
  }

  double tx_power = ends.tx_terminal->power.constant_power_w;
  if (ends.tx_terminal->power.use_edfa) {
    const auto model = resolve_edfa(ends.tx_terminal->power);
    auto state =
        amplifier::initial_state(model, ends.tx_terminal->power.start_temp_degc);
    if (t_s > cfg.t_start_s) state = amplifier::step(model, state, t_s - cfg.t_start_s);
    tx_power = state.power_w;
  }

  double pointing_error = 0.0;
  if (cfg.pat_enabled) {
    const auto tx0 = geometry::propagate(*ends.tx_platform, cfg.t_start_s, cfg.earth);
    const auto rx0 = geometry::propagate(*ends.rx_platform, cfg.t_start_s, cfg.earth);
    const LocalFrame frame =
        LocalFrame::around(geometry::link_geometry(tx0, rx0).line_of_sight);
    const auto track = make_target_track(cfg, ends, frame);
    const auto shifted = [&track, &cfg](double t) { return track(cfg.t_start_s + t); };
    const double duration = std::max(t_s - cfg.t_start_s, cfg.pat.tick_dt_s());
    const auto series =
        pat::run(shifted, cfg.pat, cfg.disturbance, cfg.seed, duration,
                 cfg.pat.tick_dt_s(), optics::divergence(ends.tx_terminal->telescope));
    pointing_error = series.samples.back().residual_rad;
  }

  link_budget::CommLedgerInputs inputs;
  inputs.tx_power_w = std::max(tx_power, 1e-12);
  inputs.tx_telescope = ends.tx_terminal->telescope;
  inputs.rx_telescope = ends.rx_terminal->telescope;
  inputs.coupling_base = ends.rx_terminal->coupling_base;
  inputs.pointing_error_rad = pointing_error;
  inputs.range_m = link.range_m;
  inputs.elevation_rad = link.elevation_rad;
  inputs.crosses_atmosphere = crosses_atmosphere(cfg, tx, rx);
  inputs.scintillation_db = link_budget::scintillation_draw_db(
      cfg.channel.scintillation_sigma, cfg.seed, t_s);
  return link_budget::comm_budget(inputs, cfg.channel, cfg.receiver);
}

std::string to_csv(const RunArtifacts& artifacts) {
  std::ostringstream out;
  out << "t_s,range_m,elevation_rad,alpha_rad";
  if (artifacts.edfa_enabled) out << ",edfa_w";
  if (artifacts.pat_enabled) out << ",residual_rad";
  out << ",pointing_loss_db,rx_dbm,margin_db";
  if (artifacts.pat_enabled) out << ",mode";
  out << "\n";

  for (const auto& row : artifacts.rows) {
    out << format_double(row.t_s) << ',' << format_double(row.range_m) << ','
        << format_double(row.elevation_rad) << ',' << format_double(row.alpha_rad);
    if (artifacts.edfa_enabled) out << ',' << format_double(row.edfa_w);
    if (artifacts.pat_enabled) out << ',' << format_double(row.residual_rad);
    out << ',' << format_double(row.pointing_loss_db) << ',';
    if (row.available) {
      out << format_double(row.rx_dbm) << ',' << format_double(row.margin_db);
    } else {
      out << ',';  // empty rx_dbm and margin cells, never NaN
    }
    if (artifacts.pat_enabled) out << ',' << pat::mode_name(row.mode);
    out << "\n";
  }
  return out.str();
}

std::string to_json(const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["scenario"] = summary.scenario_name;
  j["kind"] = summary.scenario_kind;
  j["seed"] = summary.seed;
  j["samples"] = summary.sample_count;
  j["availability"] = summary.availability;
  if (summary.has_margin) {
    j["margin_db"] = {{"min", summary.margin.min_db},
                      {"median", summary.margin.median_db},
                      {"max", summary.margin.max_db}};
  } else {
    j["margin_db"] = nullptr;
  }
  if (summary.pat_enabled) {
    j["time_to_linked_s"] =
        summary.reached_link ? nlohmann::ordered_json(summary.time_to_linked_s)
                             : nlohmann::ordered_json(nullptr);
    j["residual_rms_rad"] = std::isnan(summary.residual_rms_rad)
                                ? nlohmann::ordered_json(nullptr)
                                : nlohmann::ordered_json(summary.residual_rms_rad);
  }
  if (summary.edfa_enabled) {
    j["edfa_min_power_w"] = summary.edfa_min_power_w;
  }
  auto passes = nlohmann::ordered_json::array();
  for (const auto& pass : summary.passes) {
    passes.push_back({{"rise_s", pass.rise_s},
                      {"set_s", pass.set_s},
                      {"max_elevation_rad", pass.max_elevation_rad},
                      {"duration_s", pass.duration_s}});
  }
  j["passes"] = passes;
  j["warnings"] = summary.warnings;
  j["assumption_provenance"] = summary.provenance;
  return j.dump(2) + "\n";
}

}  // namespace lasertwin::sim

#include "lasertwin/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"

namespace lasertwin::scenario {

namespace {

using constants::deg_to_rad;
using constants::rad_to_deg;
using geometry::PlatformKind;

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream stream(s);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

struct RawEntry {
  std::vector<std::string> tokens;
  int line = 0;
  bool consumed = false;
};

/// Keys that may legally repeat (list-valued).
bool is_multi_key(const std::string& key) {
  return key.ends_with(".waypoint") || key.ends_with(".sine");
}

class Reader {
 public:
  Reader(const std::string& text, std::vector<std::string>& provenance)
      : provenance_(provenance) {
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(stream, raw)) {
      ++line;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string content = trim(raw);
      if (content.empty()) continue;
      if (content.front() == '[') {
        if (content.back() != ']')
          throw ParseError("malformed section header '" + content + "'", line);
        section = trim(content.substr(1, content.size() - 2));
        if (section.empty()) throw ParseError("empty section header", line);
        sections_.insert(section);
        continue;
      }
      const auto eq = content.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected 'key = value', got '" + content + "'", line);
      const std::string key = trim(content.substr(0, eq));
      const std::string value = trim(content.substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", line);
      if (value.empty()) throw ParseError("empty value for key '" + key + "'", line);
      const std::string full = section.empty() ? key : section + "." + key;
      RawEntry entry{split_tokens(value), line, false};
      if (is_multi_key(full)) {
        multis_[full].push_back(std::move(entry));
      } else {
        if (scalars_.count(full))
          throw ParseError("duplicate key '" + full + "'", line);
        scalars_[full] = std::move(entry);
      }
    }
  }

  bool has(const std::string& key) const { return scalars_.count(key) != 0; }

  bool section_present(const std::string& section) const {
    if (sections_.count(section)) return true;
    const std::string prefix = section + ".";
    for (const auto& [key, entry] : scalars_) {
      if (key.rfind(prefix, 0) == 0) return true;
    }
    for (const auto& [key, entries] : multis_) {
      if (key.rfind(prefix, 0) == 0) return true;
    }
    return false;
  }

  double number(const std::string& key, double fallback,
                const std::string& note = "") {
    if (const RawEntry* e = consume(key)) return to_double(single(*e, key), e->line, key);
    record_default(key, format_double(fallback), note);
    return fallback;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    if (const RawEntry* e = consume(key)) {
      const std::string& tok = single(*e, key);
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("invalid integer '" + tok + "' for key '" + key + "'",
                         e->line);
      return value;
    }
    record_default(key, std::to_string(fallback));
    return fallback;
  }

  int int_number(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v))
      throw ParseError("key '" + key + "' must be an integer", line_of(key));
    return static_cast<int>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (const RawEntry* e = consume(key)) {
      const std::string& tok = single(*e, key);
      if (tok == "true") return true;
      if (tok == "false") return false;
      throw ParseError("key '" + key + "' expects true or false", e->line);
    }
    record_default(key, fallback ? "true" : "false");
    return fallback;
  }

  std::string word(const std::string& key, const std::string& fallback,
                   const std::string& note = "") {
    if (const RawEntry* e = consume(key)) return single(*e, key);
    record_default(key, fallback, note);
    return fallback;
  }

  std::string word_required(const std::string& key) {
    if (const RawEntry* e = consume(key)) return single(*e, key);
    throw ParseError("missing required key '" + key + "'", 0);
  }

  /// All rows of a repeatable key, each with the expected token count.
  std::vector<std::vector<double>> rows(const std::string& key,
                                        std::size_t arity) {
    std::vector<std::vector<double>> out;
    auto it = multis_.find(key);
    if (it == multis_.end()) return out;
    for (RawEntry& entry : it->second) {
      entry.consumed = true;
      if (entry.tokens.size() != arity)
        throw ParseError("key '" + key + "' expects " + std::to_string(arity) +
                             " values",
                         entry.line);
      std::vector<double> row;
      for (const auto& tok : entry.tokens)
        row.push_back(to_double(tok, entry.line, key));
      out.push_back(std::move(row));
    }
    return out;
  }

  void record_default(const std::string& key, const std::string& value,
                      const std::string& note = "") {
    provenance_.push_back(key + " = " + value +
                          (note.empty() ? " (default)" : " (default; " + note + ")"));
  }

  /// Every key must have been consumed by now; leftovers are unknown.
  void finish() const {
    for (const auto& [key, entry] : scalars_) {
      if (!entry.consumed)
        throw ParseError("unknown key '" + key + "'", entry.line);
    }
    for (const auto& [key, entries] : multis_) {
      for (const auto& entry : entries) {
        if (!entry.consumed)
          throw ParseError("unknown key '" + key + "'", entry.line);
      }
    }
  }

 private:
  RawEntry* consume(const std::string& key) {
    auto it = scalars_.find(key);
    if (it == scalars_.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
  }

  int line_of(const std::string& key) const {
    auto it = scalars_.find(key);
    return it == scalars_.end() ? 0 : it->second.line;
  }

  static const std::string& single(const RawEntry& entry, const std::string& key) {
    if (entry.tokens.size() != 1)
      throw ParseError("key '" + key + "' expects a single value", entry.line);
    return entry.tokens.front();
  }

  static double to_double(const std::string& tok, int line, const std::string& key) {
    try {
      std::size_t idx = 0;
      const double v = std::stod(tok, &idx);
      if (idx != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError("invalid number '" + tok + "' for key '" + key + "'", line);
    }
  }

  std::map<std::string, RawEntry> scalars_;
  std::map<std::string, std::vector<RawEntry>> multis_;
  std::set<std::string> sections_;
  std::vector<std::string>& provenance_;
};

PlatformKind platform_kind_from(const std::string& word, int line_hint = 0) {
  if (word == "GROUND_SITE") return PlatformKind::kGroundSite;
  if (word == "HAPS") return PlatformKind::kHaps;
  if (word == "DRONE") return PlatformKind::kDrone;
  if (word == "LEO_CIRCULAR") return PlatformKind::kLeoCircular;
  if (word == "GEO") return PlatformKind::kGeo;
  throw ParseError("unknown platform kind '" + word + "'", line_hint);
}

const char* platform_kind_name(PlatformKind kind) {
  switch (kind) {
    case PlatformKind::kGroundSite: return "GROUND_SITE";
    case PlatformKind::kHaps: return "HAPS";
    case PlatformKind::kDrone: return "DRONE";
    case PlatformKind::kLeoCircular: return "LEO_CIRCULAR";
    case PlatformKind::kGeo: return "GEO";
  }
  return "?";
}

ScenarioKind scenario_kind_from(const std::string& word) {
  if (word == "LEO_GROUND") return ScenarioKind::kLeoGround;
  if (word == "LEO_GEO") return ScenarioKind::kLeoGeo;
  if (word == "GEO_GROUND") return ScenarioKind::kGeoGround;
  if (word == "HAPS_GROUND") return ScenarioKind::kHapsGround;
  if (word == "DRONE_GROUND") return ScenarioKind::kDroneGround;
  throw ParseError("unknown scenario_kind '" + word + "'", 0);
}

geometry::PlatformSpec parse_platform(Reader& reader, const std::string& prefix) {
  geometry::PlatformSpec spec;
  spec.kind = platform_kind_from(reader.word_required(prefix + ".kind"));
  switch (spec.kind) {
    case PlatformKind::kGroundSite:
      spec.latitude_deg = reader.number(prefix + ".latitude_deg", 0.0);
      spec.longitude_deg = reader.number(prefix + ".longitude_deg", 0.0);
      spec.altitude_m = reader.number(prefix + ".altitude_m", 0.0);
      break;
    case PlatformKind::kHaps:
      spec.latitude_deg = reader.number(prefix + ".latitude_deg", 0.0);
      spec.longitude_deg = reader.number(prefix + ".longitude_deg", 0.0);
      spec.altitude_m = reader.number(prefix + ".altitude_m", 20000.0);
      break;
    case PlatformKind::kDrone: {
      spec.latitude_deg = reader.number(prefix + ".latitude_deg", 0.0);
      spec.longitude_deg = reader.number(prefix + ".longitude_deg", 0.0);
      spec.altitude_m = reader.number(prefix + ".altitude_m", 100.0);
      const auto rows = reader.rows(prefix + ".waypoint", 3);
      for (const auto& row : rows) {
        spec.waypoints.push_back({row[0], row[1], row[2]});
      }
      if (spec.waypoints.empty()) {
        spec.waypoints.push_back({0.0, spec.latitude_deg, spec.longitude_deg});
        reader.record_default(prefix + ".waypoint",
                              "0 " + format_double(spec.latitude_deg) + " " +
                                  format_double(spec.longitude_deg),
                              "hover at the configured site point");
      }
      break;
    }
    case PlatformKind::kLeoCircular:
      spec.altitude_m = reader.number(
          prefix + ".altitude_m", 400000.0,
          "assumed; the reference missions do not state a LEO altitude");
      spec.inclination_deg = reader.number(prefix + ".inclination_deg", 0.0);
      spec.raan_deg = reader.number(prefix + ".raan_deg", 0.0);
      spec.initial_phase_deg = reader.number(prefix + ".initial_phase_deg", 0.0);
      break;
    case PlatformKind::kGeo:
      spec.sub_satellite_longitude_deg =
          reader.number(prefix + ".sub_satellite_longitude_deg", 0.0);
      spec.altitude_m =
          reader.number(prefix + ".altitude_m", constants::kGeoAltitude);
      break;
  }
  return spec;
}

TerminalConfig parse_terminal(Reader& reader, const std::string& prefix) {
  TerminalConfig terminal;
  auto& scope = terminal.telescope;
  scope.aperture_m = reader.number(prefix + ".aperture_m", 0.09);
  scope.magnification = reader.number(prefix + ".magnification", 40.0);
  scope.wavefront_error_waves =
      reader.number(prefix + ".wavefront_error_waves", 1.0 / 19.0);
  scope.throughput = reader.number(prefix + ".throughput", 0.93);
  scope.wavelength_m = reader.number(prefix + ".wavelength_m", 1.55e-6);
  scope.divergence_factor = reader.number(prefix + ".divergence_factor", 1.0);
  terminal.coupling_base = reader.number(prefix + ".coupling_base", 0.81);

  const std::string source = reader.word(prefix + ".source", "constant");
  if (source == "constant") {
    terminal.power.use_edfa = false;
    terminal.power.constant_power_w = reader.number(prefix + ".tx_power_w", 2.0);
  } else if (source == "edfa") {
    terminal.power.use_edfa = true;
    auto& edfa = terminal.power.edfa;
    const std::string ep = prefix + ".edfa";
    edfa.initial_power_w = reader.number(ep + ".initial_power_w", 2.5);
    edfa.tau_s = reader.number(ep + ".tau_s", 1200.0);
    edfa.delta_t_ss_degc = reader.number(ep + ".delta_t_ss_degc", 20.0);
    edfa.t_ref_degc = reader.number(ep + ".t_ref_degc", 25.0);
    edfa.t_env_degc = reader.number(ep + ".t_env_degc", 25.0);
    terminal.power.start_temp_degc = reader.number(ep + ".start_temp_degc", 25.0);
    auto& constraints = terminal.power.constraints;
    constraints.initial_power_w = edfa.initial_power_w;
    constraints.t1_s = reader.number(ep + ".calibrate_t1_s", 360.0);
    constraints.min_power_w = reader.number(ep + ".calibrate_min_power_w", 2.0);
    if (reader.has(ep + ".slope_w_per_degc")) {
      terminal.power.calibrate_slope = false;
      edfa.slope_w_per_degc = reader.number(ep + ".slope_w_per_degc", 0.0);
    } else {
      terminal.power.calibrate_slope = true;
      reader.record_default(ep + ".slope_w_per_degc", "calibrated",
                            "solved from the calibration constraints");
    }
  } else {
    throw ParseError("key '" + prefix + ".source' expects constant or edfa", 0);
  }
  return terminal;
}

}  // namespace

const char* scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kLeoGround: return "LEO_GROUND";
    case ScenarioKind::kLeoGeo: return "LEO_GEO";
    case ScenarioKind::kGeoGround: return "GEO_GROUND";
    case ScenarioKind::kHapsGround: return "HAPS_GROUND";
    case ScenarioKind::kDroneGround: return "DRONE_GROUND";
  }
  return "?";
}

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& fallback_name) {
  ScenarioConfig cfg;
  cfg.provenance.clear();
  Reader reader(text, cfg.provenance);

  cfg.name = reader.word("name", fallback_name, "from the file name");
  cfg.kind = scenario_kind_from(reader.word_required("scenario_kind"));
  cfg.t_start_s = reader.number("t_start_s", 0.0);
  cfg.t_end_s = reader.number("t_end_s", 600.0);
  cfg.budget_step_s = reader.number("budget_step_s", 0.1);
  cfg.seed = reader.integer("seed", 1);
  cfg.earth.rotating = reader.boolean("earth_rotation", false);
  cfg.atmosphere_top_m = reader.number("atmosphere_top_m", 15000.0);
  cfg.edfa_warning_floor_w = reader.number("edfa_warning_floor_w", 2.0);

  cfg.platform_a = parse_platform(reader, "platform.a");
  cfg.platform_b = parse_platform(reader, "platform.b");
  cfg.terminal_a = parse_terminal(reader, "terminal.a");
  cfg.terminal_b = parse_terminal(reader, "terminal.b");

  cfg.channel.zenith_loss_db = reader.number("channel.zenith_loss_db", 1.0);
  cfg.channel.scintillation_sigma =
      reader.number("channel.scintillation_sigma", 0.0);
  cfg.channel.min_elevation_rad =
      deg_to_rad(reader.number("channel.min_elevation_deg", 5.0));

  cfg.receiver.rate_bps = reader.number("receiver.rate_bps", 1e10);
  cfg.receiver.sensitivity_photons_per_bit = reader.number(
      "receiver.sensitivity_photons_per_bit", 1000.0,
      "stand-in sensitivity; the modem's real figure is not published");
  cfg.receiver.wavelength_m = reader.number("receiver.wavelength_m", 1.55e-6);

  const std::string direction = reader.word("link.direction", "a_to_b");
  if (direction == "a_to_b") {
    cfg.direction = LinkDirection::kAToB;
  } else if (direction == "b_to_a") {
    cfg.direction = LinkDirection::kBToA;
  } else {
    throw ParseError("key 'link.direction' expects a_to_b or b_to_a", 0);
  }

  cfg.beacon.beam.power_w = reader.number("beacon.tx_power_w", 1.0);
  cfg.beacon.beam.divergence_rad = reader.number(
      "beacon.divergence_rad", 1e-3, "beacon divergence not published");

  cfg.pat_enabled = reader.section_present("pat");
  if (cfg.pat_enabled) {
    auto& pat = cfg.pat;
    pat.coarse_fov_rad = deg_to_rad(reader.number("pat.coarse_fov_deg", 2.5));
    pat.fine_fov_rad = reader.number("pat.fine_fov_rad", 1e-3);
    pat.gimbal_rate_limit_rad_s =
        reader.number("pat.gimbal_rate_limit_rad_s", 0.35);
    pat.gimbal_rate_hz = reader.number("pat.gimbal_rate_hz", 100.0);
    pat.gimbal_gains.kp = reader.number("pat.gimbal_kp", 22.62);
    pat.gimbal_gains.ki = reader.number("pat.gimbal_ki", 158.0);
    pat.fpm_range_rad = reader.number("pat.fpm_range_rad", 2e-3);
    pat.fpm_rate_hz = reader.number("pat.fpm_rate_hz", 1000.0);
    pat.fpm_gains.kp = reader.number("pat.fpm_kp", 339.3);
    pat.fpm_gains.ki = reader.number("pat.fpm_ki", 35530.6);
    pat.coarse_noise_rad = reader.number("pat.coarse_noise_rad", 10e-6);
    pat.fine_noise_rad = reader.number("pat.fine_noise_rad", 1e-6);
    pat.handover_dwell_steps = reader.int_number("pat.handover_dwell_steps", 50);
    pat.beacon_threshold_dbm = reader.number("pat.beacon_threshold_dbm", -90.0);
    pat.link_rms_threshold_rad =
        reader.number("pat.link_rms_threshold_rad", 5e-6);
    pat.uncertainty_cone_rad =
        deg_to_rad(reader.number("pat.uncertainty_cone_deg", 5.0));
    pat.spiral_pitch_factor = reader.number("pat.spiral_pitch_factor", 0.8);
    pat.fine_loop_enabled = reader.boolean("pat.fine_loop_enabled", true);

    auto& dist = cfg.disturbance;
    dist.bias_rad.x() = reader.number("pat.disturbance.bias_x_rad", 0.0);
    dist.bias_rad.y() = reader.number("pat.disturbance.bias_y_rad", 0.0);
    dist.random_walk_rad_sqrt_s =
        reader.number("pat.disturbance.random_walk_rad_sqrt_s", 0.0);
    dist.seed = reader.integer("pat.disturbance.seed", 1);
    for (const auto& row : reader.rows("pat.disturbance.sine", 4)) {
      dist.sinusoids.push_back({row[0], row[1], row[2], row[3]});
    }
  }

  cfg.pass_min_elevation_rad =
      deg_to_rad(reader.number("passes.min_elevation_deg", 5.0));
  cfg.pass_step_s = reader.number("passes.step_s", 1.0);

  reader.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario(buffer.str(),
                        std::filesystem::path(path).stem().string());
}

void ScenarioConfig::validate() const {
  if (name.empty() ||
      name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                             "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") !=
          std::string::npos) {
    throw ConfigError("scenario name must be non-empty and [A-Za-z0-9_.-]");
  }
  platform_a.validate();
  platform_b.validate();

  const auto pair_is = [&](PlatformKind x, PlatformKind y) {
    return (platform_a.kind == x && platform_b.kind == y) ||
           (platform_a.kind == y && platform_b.kind == x);
  };
  bool consistent = false;
  switch (kind) {
    case ScenarioKind::kLeoGround:
      consistent = pair_is(PlatformKind::kLeoCircular, PlatformKind::kGroundSite);
      break;
    case ScenarioKind::kLeoGeo:
      consistent = pair_is(PlatformKind::kLeoCircular, PlatformKind::kGeo);
      break;
    case ScenarioKind::kGeoGround:
      consistent = pair_is(PlatformKind::kGeo, PlatformKind::kGroundSite);
      break;
    case ScenarioKind::kHapsGround:
      consistent = pair_is(PlatformKind::kHaps, PlatformKind::kGroundSite);
      break;
    case ScenarioKind::kDroneGround:
      consistent = pair_is(PlatformKind::kDrone, PlatformKind::kGroundSite);
      break;
  }
  if (!consistent) {
    throw ConfigError(std::string("platform kinds (") +
                      platform_kind_name(platform_a.kind) + ", " +
                      platform_kind_name(platform_b.kind) +
                      ") are inconsistent with scenario_kind " +
                      scenario_kind_name(kind));
  }

  for (const TerminalConfig* terminal : {&terminal_a, &terminal_b}) {
    terminal->telescope.validate();
    if (terminal->coupling_base <= 0.0 || terminal->coupling_base > 1.0)
      throw ConfigError("terminal coupling_base must be in (0, 1]");
    if (terminal->power.use_edfa) {
      terminal->power.edfa.validate();
      if (terminal->power.constraints.min_power_w < 0.0)
        throw ConfigError("edfa calibrate_min_power_w must be >= 0");
    } else if (terminal->power.constant_power_w <= 0.0) {
      throw ConfigError("terminal tx_power_w must be > 0");
    }
  }

  channel.validate();
  receiver.validate();
  if (beacon.beam.power_w <= 0.0)
    throw ConfigError("beacon tx_power_w must be > 0");
  if (beacon.beam.divergence_rad <= 0.0)
    throw ConfigError("beacon divergence_rad must be > 0");

  if (t_end_s <= t_start_s) throw ConfigError("t_end_s must be > t_start_s");
  if (t_start_s < 0.0) throw ConfigError("t_start_s must be >= 0");
  if (budget_step_s <= 0.0) throw ConfigError("budget_step_s must be > 0");
  if (atmosphere_top_m < 0.0) throw ConfigError("atmosphere_top_m must be >= 0");
  if (edfa_warning_floor_w < 0.0)
    throw ConfigError("edfa_warning_floor_w must be >= 0");
  if (pass_step_s <= 0.0 || pass_step_s > 1.0)
    throw ConfigError("passes step_s must be in (0, 1] s");

  if (pat_enabled) {
    pat.validate();
    disturbance.validate();
    const double ratio = budget_step_s * pat.fpm_rate_hz;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9) {
      throw ConfigError(
          "budget_step_s must be an integer multiple of the PAT tick "
          "(1 / fpm_rate_hz)");
    }
  }
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) { return format_double(v); };

  out << "name = " << cfg.name << "\n";
  out << "scenario_kind = " << scenario_kind_name(cfg.kind) << "\n";
  out << "t_start_s = " << num(cfg.t_start_s) << "\n";
  out << "t_end_s = " << num(cfg.t_end_s) << "\n";
  out << "budget_step_s = " << num(cfg.budget_step_s) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "earth_rotation = " << (cfg.earth.rotating ? "true" : "false") << "\n";
  out << "atmosphere_top_m = " << num(cfg.atmosphere_top_m) << "\n";
  out << "edfa_warning_floor_w = " << num(cfg.edfa_warning_floor_w) << "\n";

  const auto write_platform = [&](const char* section,
                                  const geometry::PlatformSpec& p) {
    out << "\n[" << section << "]\n";
    out << "kind = " << platform_kind_name(p.kind) << "\n";
    switch (p.kind) {
      case PlatformKind::kGroundSite:
      case PlatformKind::kHaps:
        out << "latitude_deg = " << num(p.latitude_deg) << "\n";
        out << "longitude_deg = " << num(p.longitude_deg) << "\n";
        out << "altitude_m = " << num(p.altitude_m) << "\n";
        break;
      case PlatformKind::kDrone:
        out << "latitude_deg = " << num(p.latitude_deg) << "\n";
        out << "longitude_deg = " << num(p.longitude_deg) << "\n";
        out << "altitude_m = " << num(p.altitude_m) << "\n";
        for (const auto& wp : p.waypoints) {
          out << "waypoint = " << num(wp.time_s) << " " << num(wp.latitude_deg)
              << " " << num(wp.longitude_deg) << "\n";
        }
        break;
      case PlatformKind::kLeoCircular:
        out << "altitude_m = " << num(p.altitude_m) << "\n";
        out << "inclination_deg = " << num(p.inclination_deg) << "\n";
        out << "raan_deg = " << num(p.raan_deg) << "\n";
        out << "initial_phase_deg = " << num(p.initial_phase_deg) << "\n";
        break;
      case PlatformKind::kGeo:
        out << "sub_satellite_longitude_deg = "
            << num(p.sub_satellite_longitude_deg) << "\n";
        out << "altitude_m = "
            << num(p.altitude_m == 0.0 ? constants::kGeoAltitude : p.altitude_m)
            << "\n";
        break;
    }
  };
  write_platform("platform.a", cfg.platform_a);
  write_platform("platform.b", cfg.platform_b);

  const auto write_terminal = [&](const char* section, const TerminalConfig& t) {
    out << "\n[" << section << "]\n";
    out << "aperture_m = " << num(t.telescope.aperture_m) << "\n";
    out << "magnification = " << num(t.telescope.magnification) << "\n";
    out << "wavefront_error_waves = " << num(t.telescope.wavefront_error_waves)
        << "\n";
    out << "throughput = " << num(t.telescope.throughput) << "\n";
    out << "wavelength_m = " << num(t.telescope.wavelength_m) << "\n";
    out << "divergence_factor = " << num(t.telescope.divergence_factor) << "\n";
    out << "coupling_base = " << num(t.coupling_base) << "\n";
    out << "source = " << (t.power.use_edfa ? "edfa" : "constant") << "\n";
    if (t.power.use_edfa) {
      out << "\n[" << section << ".edfa]\n";
      out << "initial_power_w = " << num(t.power.edfa.initial_power_w) << "\n";
      out << "tau_s = " << num(t.power.edfa.tau_s) << "\n";
      out << "delta_t_ss_degc = " << num(t.power.edfa.delta_t_ss_degc) << "\n";
      out << "t_ref_degc = " << num(t.power.edfa.t_ref_degc) << "\n";
      out << "t_env_degc = " << num(t.power.edfa.t_env_degc) << "\n";
      out << "start_temp_degc = " << num(t.power.start_temp_degc) << "\n";
      out << "calibrate_t1_s = " << num(t.power.constraints.t1_s) << "\n";
      out << "calibrate_min_power_w = " << num(t.power.constraints.min_power_w)
          << "\n";
      if (!t.power.calibrate_slope) {
        out << "slope_w_per_degc = " << num(t.power.edfa.slope_w_per_degc) << "\n";
      }
    } else {
      out << "tx_power_w = " << num(t.power.constant_power_w) << "\n";
    }
  };
  write_terminal("terminal.a", cfg.terminal_a);
  write_terminal("terminal.b", cfg.terminal_b);

  out << "\n[channel]\n";
  out << "zenith_loss_db = " << num(cfg.channel.zenith_loss_db) << "\n";
  out << "scintillation_sigma = " << num(cfg.channel.scintillation_sigma) << "\n";
  out << "min_elevation_deg = " << num(rad_to_deg(cfg.channel.min_elevation_rad))
      << "\n";

  out << "\n[receiver]\n";
  out << "rate_bps = " << num(cfg.receiver.rate_bps) << "\n";
  out << "sensitivity_photons_per_bit = "
      << num(cfg.receiver.sensitivity_photons_per_bit) << "\n";
  out << "wavelength_m = " << num(cfg.receiver.wavelength_m) << "\n";

  out << "\n[link]\n";
  out << "direction = "
      << (cfg.direction == LinkDirection::kAToB ? "a_to_b" : "b_to_a") << "\n";

  out << "\n[beacon]\n";
  out << "tx_power_w = " << num(cfg.beacon.beam.power_w) << "\n";
  out << "divergence_rad = " << num(cfg.beacon.beam.divergence_rad) << "\n";

  if (cfg.pat_enabled) {
    out << "\n[pat]\n";
    out << "coarse_fov_deg = " << num(rad_to_deg(cfg.pat.coarse_fov_rad)) << "\n";
    out << "fine_fov_rad = " << num(cfg.pat.fine_fov_rad) << "\n";
    out << "gimbal_rate_limit_rad_s = " << num(cfg.pat.gimbal_rate_limit_rad_s)
        << "\n";
    out << "gimbal_rate_hz = " << num(cfg.pat.gimbal_rate_hz) << "\n";
    out << "gimbal_kp = " << num(cfg.pat.gimbal_gains.kp) << "\n";
    out << "gimbal_ki = " << num(cfg.pat.gimbal_gains.ki) << "\n";
    out << "fpm_range_rad = " << num(cfg.pat.fpm_range_rad) << "\n";
    out << "fpm_rate_hz = " << num(cfg.pat.fpm_rate_hz) << "\n";
    out << "fpm_kp = " << num(cfg.pat.fpm_gains.kp) << "\n";
    out << "fpm_ki = " << num(cfg.pat.fpm_gains.ki) << "\n";
    out << "coarse_noise_rad = " << num(cfg.pat.coarse_noise_rad) << "\n";
    out << "fine_noise_rad = " << num(cfg.pat.fine_noise_rad) << "\n";
    out << "handover_dwell_steps = " << cfg.pat.handover_dwell_steps << "\n";
    out << "beacon_threshold_dbm = " << num(cfg.pat.beacon_threshold_dbm) << "\n";
    out << "link_rms_threshold_rad = " << num(cfg.pat.link_rms_threshold_rad)
        << "\n";
    out << "uncertainty_cone_deg = "
        << num(rad_to_deg(cfg.pat.uncertainty_cone_rad)) << "\n";
    out << "spiral_pitch_factor = " << num(cfg.pat.spiral_pitch_factor) << "\n";
    out << "fine_loop_enabled = " << (cfg.pat.fine_loop_enabled ? "true" : "false")
        << "\n";

    out << "\n[pat.disturbance]\n";
    out << "bias_x_rad = " << num(cfg.disturbance.bias_rad.x()) << "\n";
    out << "bias_y_rad = " << num(cfg.disturbance.bias_rad.y()) << "\n";
    out << "random_walk_rad_sqrt_s = "
        << num(cfg.disturbance.random_walk_rad_sqrt_s) << "\n";
    out << "seed = " << cfg.disturbance.seed << "\n";
    for (const auto& sine : cfg.disturbance.sinusoids) {
      out << "sine = " << num(sine.amplitude_rad) << " " << num(sine.frequency_hz)
          << " " << num(sine.phase_rad) << " " << num(sine.axis_rad) << "\n";
    }
  }

  out << "\n[passes]\n";
  out << "min_elevation_deg = " << num(rad_to_deg(cfg.pass_min_elevation_rad))
      << "\n";
  out << "step_s = " << num(cfg.pass_step_s) << "\n";
  return out.str();
}

}  // namespace lasertwin::scenario

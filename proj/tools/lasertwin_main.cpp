// Command-line front end: run scenarios, predict passes, print itemized
// budgets and calibrate the EDFA thermal model. Exit codes: 0 success,
// 1 configuration error, 2 runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lasertwin/amplifier.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/scenario.hpp"
#include "lasertwin/simulation.hpp"

namespace {

namespace fs = std::filesystem;
using lasertwin::scenario::ScenarioConfig;

struct CommonOptions {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

/// Seed precedence: --seed flag, then LASERCOM_SEED, then the scenario file.
ScenarioConfig load_scenario(const CommonOptions& opts) {
  ScenarioConfig cfg = lasertwin::scenario::parse_scenario_file(opts.scenario_path);
  if (const char* env = std::getenv("LASERCOM_SEED"); env != nullptr) {
    cfg.seed = std::stoull(env);
  }
  if (opts.seed_given) cfg.seed = opts.seed;
  return cfg;
}

std::string format_db(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%12.4f", value);
  return buf;
}

void print_report(const lasertwin::link_budget::LinkBudgetReport& report,
                  const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["available"] = report.available;
    if (!report.available) j["reason"] = report.unavailable_reason;
    if (report.available) {
      j["tx_power_dbm"] = report.tx_power_dbm;
      auto terms = nlohmann::ordered_json::array();
      for (const auto& term : report.terms) {
        terms.push_back({{"name", term.name}, {"value_db", term.value_db}});
      }
      j["terms"] = terms;
      j["received_dbm"] = report.received_dbm;
    }
    j["required_dbm"] = report.required_dbm;
    if (report.available) j["margin_db"] = report.margin_db;
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (!report.available) {
    std::cout << "link unavailable: " << report.unavailable_reason << "\n";
    std::cout << "required " << format_db(report.required_dbm) << " dBm\n";
    return;
  }
  std::cout << "tx_power            " << format_db(report.tx_power_dbm) << " dBm\n";
  for (const auto& term : report.terms) {
    std::printf("%-20s%s dB\n", term.name.c_str(), format_db(term.value_db).c_str());
  }
  std::cout << "received            " << format_db(report.received_dbm) << " dBm\n";
  std::cout << "required            " << format_db(report.required_dbm) << " dBm\n";
  std::cout << "margin              " << format_db(report.margin_db) << " dB\n";
}

int cmd_run(const CommonOptions& opts) {
  const ScenarioConfig cfg = load_scenario(opts);
  const auto artifacts = lasertwin::sim::run_scenario(cfg);

  const fs::path dir = fs::path(opts.out_dir) / cfg.name;
  fs::create_directories(dir);
  const fs::path csv_path = dir / "timeseries.csv";
  const fs::path json_path = dir / "summary.json";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << lasertwin::sim::to_csv(artifacts);
  }
  {
    std::ofstream json(json_path, std::ios::binary);
    json << lasertwin::sim::to_json(artifacts.summary);
  }
  for (const auto& warning : artifacts.summary.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["timeseries"] = csv_path.string();
    j["summary"] = json_path.string();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << csv_path.string() << "\n" << json_path.string() << "\n";
  }
  return 0;
}

int cmd_passes(const CommonOptions& opts) {
  const ScenarioConfig cfg = load_scenario(opts);
  const auto passes = lasertwin::sim::scenario_passes(cfg);
  if (opts.format == "json") {
    auto j = nlohmann::ordered_json::array();
    for (const auto& pass : passes) {
      j.push_back({{"rise_s", pass.rise_s},
                   {"set_s", pass.set_s},
                   {"max_elevation_rad", pass.max_elevation_rad},
                   {"duration_s", pass.duration_s}});
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "rise_s,set_s,max_elevation_rad,duration_s\n";
    for (const auto& pass : passes) {
      std::printf("%.3f,%.3f,%.6f,%.3f\n", pass.rise_s, pass.set_s,
                  pass.max_elevation_rad, pass.duration_s);
    }
  }
  return 0;
}

int cmd_budget(const CommonOptions& opts, double at_s) {
  const ScenarioConfig cfg = load_scenario(opts);
  print_report(lasertwin::sim::budget_at(cfg, at_s), opts.format);
  return 0;
}

int cmd_calibrate(const CommonOptions& opts) {
  const ScenarioConfig cfg = load_scenario(opts);
  const lasertwin::scenario::PowerSource* source = nullptr;
  for (const auto* terminal : {&cfg.terminal_a, &cfg.terminal_b}) {
    if (terminal->power.use_edfa) {
      source = &terminal->power;
      break;
    }
  }
  if (source == nullptr) {
    throw lasertwin::ConfigError(
        "calibrate-edfa: no terminal with source = edfa in this scenario");
  }
  const auto result = lasertwin::amplifier::calibrate(source->constraints, source->edfa);
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["initial_power_w"] = result.model.initial_power_w;
    j["slope_w_per_degc"] = result.model.slope_w_per_degc;
    j["tau_s"] = result.model.tau_s;
    j["delta_t_ss_degc"] = result.model.delta_t_ss_degc;
    j["t_ref_degc"] = result.model.t_ref_degc;
    j["t_env_degc"] = result.model.t_env_degc;
    j["equality_margin_w"] = result.equality_margin_w;
    j["underdetermined"] = result.underdetermined;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("initial_power_w    %.6f\n", result.model.initial_power_w);
    std::printf("slope_w_per_degc   %.6f\n", result.model.slope_w_per_degc);
    std::printf("tau_s              %.6f\n", result.model.tau_s);
    std::printf("delta_t_ss_degc    %.6f\n", result.model.delta_t_ss_degc);
    std::printf("t_ref_degc         %.6f\n", result.model.t_ref_degc);
    std::printf("t_env_degc         %.6f\n", result.model.t_env_degc);
    std::printf("equality_margin_w  %.9f\n", result.equality_margin_w);
    std::printf("underdetermined    %s\n", result.underdetermined ? "true" : "false");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lasertwin - lasercom terminal digital-twin simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  double at_s = 0.0;

  const auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("scenario", opts.scenario_path, "scenario file")->required();
    if (with_out) cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the scenario seed")
        ->each([&](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--format", opts.format, "stdout format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* run = app.add_subcommand("run", "simulate a scenario and write artifacts");
  add_common(run, true);
  auto* passes = app.add_subcommand("passes", "predict visibility passes");
  add_common(passes, false);
  auto* budget = app.add_subcommand("budget", "itemized link budget at one instant");
  add_common(budget, false);
  budget->add_option("--at", at_s, "time within the scenario window [s]")->required();
  auto* calibrate =
      app.add_subcommand("calibrate-edfa", "fit the EDFA thermal model");
  add_common(calibrate, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opts);
    if (passes->parsed()) return cmd_passes(opts);
    if (budget->parsed()) return cmd_budget(opts, at_s);
    if (calibrate->parsed()) return cmd_calibrate(opts);
  } catch (const lasertwin::ParseError& err) {
    std::cerr << "error: " << opts.scenario_path << ": " << err.what() << "\n";
    return 1;
  } catch (const lasertwin::ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const lasertwin::CalibrationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "runtime error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}

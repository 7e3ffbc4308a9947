#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lasertwin/geometry.hpp"
#include "lasertwin/link_budget.hpp"
#include "lasertwin/pat.hpp"
#include "lasertwin/scenario.hpp"

namespace lasertwin::sim {

/// One budget-cadence output row. Fields that do not apply hold NaN and are
/// omitted from the CSV (absent features emit no columns).
struct BudgetSample {
  double t_s = 0.0;
  double range_m = 0.0;
  double elevation_rad = 0.0;
  double alpha_rad = 0.0;
  double edfa_w = 0.0;
  double residual_rad = 0.0;
  double pointing_loss_db = 0.0;
  double rx_dbm = 0.0;
  double margin_db = 0.0;
  bool available = false;
  std::string status;  // "ok", "below_min_elevation", "earth_blocked"
  pat::Mode mode = pat::Mode::kIdle;
};

struct MarginStats {
  double min_db = 0.0;
  double median_db = 0.0;
  double max_db = 0.0;
};

struct RunSummary {
  std::string scenario_name;
  std::string scenario_kind;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  /// Fraction of budget samples with an available link and margin >= 0.
  double availability = 0.0;
  bool has_margin = false;  // at least one sample with a computed budget
  MarginStats margin;
  bool pat_enabled = false;
  bool reached_link = false;
  double time_to_linked_s = 0.0;
  double residual_rms_rad = 0.0;  // over LINKED budget samples
  bool edfa_enabled = false;
  double edfa_min_power_w = 0.0;
  std::vector<geometry::PassWindow> passes;
  std::vector<std::string> warnings;
  std::vector<std::string> provenance;
};

struct RunArtifacts {
  RunSummary summary;
  std::vector<BudgetSample> rows;
  bool pat_enabled = false;
  bool edfa_enabled = false;
};

/// Orchestrate one scenario: propagate -> link geometry -> EDFA power ->
/// PAT residual (when enabled) -> itemized budget per budget step, then
/// aggregate. Deterministic for a given config.
RunArtifacts run_scenario(const scenario::ScenarioConfig& cfg);

/// Single-instant itemized ledger (the `budget` subcommand). Runs the PAT
/// chain up to `t` when the scenario enables it; otherwise assumes zero
/// pointing error.
link_budget::LinkBudgetReport budget_at(const scenario::ScenarioConfig& cfg,
                                        double t_s);

/// Pass prediction for scenarios pairing a LEO platform with a ground or
/// HAPS site (the `passes` subcommand).
std::vector<geometry::PassWindow> scenario_passes(
    const scenario::ScenarioConfig& cfg);

/// Fixed-order CSV: t_s, range_m, elevation_rad, alpha_rad [, edfa_w]
/// [, residual_rad], pointing_loss_db, rx_dbm, margin_db [, mode]. Values on
/// unavailable rows are left empty, never NaN.
std::string to_csv(const RunArtifacts& artifacts);

/// JSON summary with stable keys, including the assumption provenance list.
std::string to_json(const RunSummary& summary);

}  // namespace lasertwin::sim

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lasertwin/optics.hpp"

namespace lasertwin::link_budget {

/// Decibel helpers. Power decibels (10 log10) throughout; field quantities
/// are never exposed.
double db_from_linear(double ratio);
double linear_from_db(double db);
double dbm_from_watts(double watts);

struct ChannelConfig {
  double zenith_loss_db = 1.0;        // one-way loss at zenith, >= 0
  double scintillation_sigma = 0.0;   // log-amplitude sigma_I, 0 = off
  double min_elevation_rad = 0.08726646259971647;  // 5 deg

  void validate() const;  // throws ConfigError
};

struct ReceiverSpec {
  double rate_bps = 1e10;
  double sensitivity_photons_per_bit = 1000.0;
  double wavelength_m = 1.55e-6;

  void validate() const;  // throws ConfigError
};

enum class TermKind : std::uint8_t {
  kGain,    // may be positive (antenna gains)
  kLoss,    // must be <= 0 dB
  kFading,  // zero-mean draw, either sign (scintillation)
};

struct BudgetTerm {
  std::string name;
  double value_db = 0.0;
  TermKind kind = TermKind::kLoss;
};

/// Itemized dB ledger from transmit power to margin. When `available` is
/// false no power numbers are claimed: received/margin are NaN and
/// `unavailable_reason` says why (never a silent NaN).
struct LinkBudgetReport {
  bool available = true;
  std::string unavailable_reason;
  double tx_power_dbm = 0.0;
  std::vector<BudgetTerm> terms;
  double received_dbm = 0.0;
  double required_dbm = 0.0;
  double margin_db = 0.0;
};

LinkBudgetReport unavailable_report(std::string reason);

/// L = 20*log10(lambda / (4*pi*R)), always negative for R > lambda. [dB]
double free_space_loss_db(double range_m, double wavelength_m);

/// Flat airmass scaling of the zenith loss: -zenith_db / sin(elevation).
/// Exo-atmospheric paths cost nothing. Returns nullopt (link infeasible)
/// when the path crosses the atmosphere below the minimum usable elevation.
std::optional<double> atmospheric_loss_db(const ChannelConfig& cfg,
                                          double elevation_rad,
                                          bool crosses_atmosphere);

/// Receiver sensitivity expressed as required optical power:
/// photons/bit * (h*c/lambda) * data rate. [dBm]
double required_power_dbm(const ReceiverSpec& rx);

/// Log-normal scintillation fade with unit mean intensity,
/// E[10^(x/10)] = 1. A stateless function of (sigma, seed, t). [dB]
double scintillation_draw_db(double sigma, std::uint64_t seed, double t);

/// Sum the dB ledger onto the transmit power and compare against the
/// receiver requirement. Throws ConfigError if a loss-class term is
/// positive. The dB sum is cross-checked against the linear-domain product.
LinkBudgetReport compose(double tx_power_w, std::vector<BudgetTerm> terms,
                         const ReceiverSpec& rx);

/// Same pipeline with an explicit required-power level (beacon detection
/// thresholds instead of a modem sensitivity).
LinkBudgetReport compose_with_required(double tx_power_w,
                                       std::vector<BudgetTerm> terms,
                                       double required_dbm);

/// Inputs the runner assembles per sample for the communication ledger.
struct CommLedgerInputs {
  double tx_power_w = 2.0;
  optics::TelescopeSpec tx_telescope;
  optics::TelescopeSpec rx_telescope;
  double coupling_base = 0.81;
  double pointing_error_rad = 0.0;
  double range_m = 0.0;
  double elevation_rad = 0.0;     // at the lower platform
  bool crosses_atmosphere = true;
  double scintillation_db = 0.0;  // pre-drawn; 0 when disabled
};

/// Build the canonical ledger (tx path efficiency, tx antenna gain, strehl,
/// pointing loss, free-space loss, atmospheric loss, scintillation, rx
/// antenna gain, rx path efficiency, coupling efficiency) and compose it.
LinkBudgetReport comm_budget(const CommLedgerInputs& in,
                             const ChannelConfig& channel,
                             const ReceiverSpec& rx);

/// Beacon inputs: wide Gaussian beam, direct detection (no fiber coupling,
/// no Strehl term), threshold in place of a modem sensitivity.
struct BeaconLedgerInputs {
  optics::BeamModel beam{1e-3, 1.0};  // 1 mrad half-angle, 1 W
  double tx_path_efficiency = 0.93;
  double rx_aperture_m = 0.09;
  double rx_path_efficiency = 0.93;
  double wavelength_m = 1.55e-6;
  double pointing_error_rad = 0.0;  // of the beacon transmitter
  double range_m = 0.0;
  double elevation_rad = 0.0;
  bool crosses_atmosphere = true;
  double detection_threshold_dbm = -90.0;
};

LinkBudgetReport beacon_budget(const BeaconLedgerInputs& in,
                               const ChannelConfig& channel);

}  // namespace lasertwin::link_budget

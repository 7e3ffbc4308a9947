#include "lasertwin/link_budget.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <utility>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/rng.hpp"

namespace lasertwin::link_budget {

using constants::kPi;

double db_from_linear(double ratio) { return 10.0 * std::log10(ratio); }
double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }
double dbm_from_watts(double watts) { return 10.0 * std::log10(watts * 1000.0); }

void ChannelConfig::validate() const {
  if (zenith_loss_db < 0.0) throw ConfigError("channel zenith_loss_db must be >= 0");
  if (scintillation_sigma < 0.0)
    throw ConfigError("channel scintillation_sigma must be >= 0");
  if (min_elevation_rad < 0.0 || min_elevation_rad > constants::kPi / 2.0)
    throw ConfigError("channel min_elevation_deg must be in [0, 90]");
}

void ReceiverSpec::validate() const {
  if (rate_bps <= 0.0) throw ConfigError("receiver rate_bps must be > 0");
  if (sensitivity_photons_per_bit <= 0.0)
    throw ConfigError("receiver sensitivity_photons_per_bit must be > 0");
  if (wavelength_m <= 0.0) throw ConfigError("receiver wavelength_m must be > 0");
}

LinkBudgetReport unavailable_report(std::string reason) {
  LinkBudgetReport report;
  report.available = false;
  report.unavailable_reason = std::move(reason);
  report.received_dbm = std::numeric_limits<double>::quiet_NaN();
  report.required_dbm = std::numeric_limits<double>::quiet_NaN();
  report.margin_db = std::numeric_limits<double>::quiet_NaN();
  return report;
}

double free_space_loss_db(double range_m, double wavelength_m) {
  if (range_m <= 0.0) throw ConfigError("free_space_loss range_m must be > 0");
  if (wavelength_m <= 0.0) throw ConfigError("free_space_loss wavelength_m must be > 0");
  return 20.0 * std::log10(wavelength_m / (4.0 * kPi * range_m));
}

std::optional<double> atmospheric_loss_db(const ChannelConfig& cfg,
                                          double elevation_rad,
                                          bool crosses_atmosphere) {
  if (!crosses_atmosphere) return 0.0;
  if (elevation_rad < cfg.min_elevation_rad || elevation_rad <= 0.0) {
    return std::nullopt;
  }
  return -cfg.zenith_loss_db / std::sin(elevation_rad);
}

double required_power_dbm(const ReceiverSpec& rx) {
  const double photon_energy_j =
      constants::kPlanck * constants::kSpeedOfLight / rx.wavelength_m;
  const double watts = rx.sensitivity_photons_per_bit * photon_energy_j * rx.rate_bps;
  return dbm_from_watts(watts);
}

double scintillation_draw_db(double sigma, std::uint64_t seed, double t) {
  if (sigma < 0.0) throw ConfigError("scintillation sigma must be >= 0");
  if (sigma == 0.0) return 0.0;
  std::mt19937_64 engine(rng::key_for(seed, t));
  // ln I ~ N(-2 sigma^2, (2 sigma)^2) gives E[I] = 1 (unit mean intensity).
  const double ln_intensity = -2.0 * sigma * sigma + 2.0 * sigma * rng::normal(engine);
  return 10.0 * ln_intensity / std::log(10.0);
}

LinkBudgetReport compose_with_required(double tx_power_w,
                                       std::vector<BudgetTerm> terms,
                                       double required_dbm) {
  if (tx_power_w <= 0.0) throw ConfigError("compose tx_power_w must be > 0");
  LinkBudgetReport report;
  report.tx_power_dbm = dbm_from_watts(tx_power_w);

  double sum_db = 0.0;
  for (const BudgetTerm& term : terms) {
    if (term.kind == TermKind::kLoss && term.value_db > 0.0) {
      throw ConfigError("budget term '" + term.name +
                        "' is loss-class but positive (" +
                        std::to_string(term.value_db) + " dB)");
    }
    sum_db += term.value_db;
  }
  report.terms = std::move(terms);
  report.received_dbm = report.tx_power_dbm + sum_db;

  // Linear-domain cross-check, skipped when the product would leave the
  // normal double range (huge pointing losses during acquisition).
  if (std::abs(sum_db) < 1000.0) {
    double product = tx_power_w * 1000.0;
    for (const BudgetTerm& term : report.terms) {
      product *= linear_from_db(term.value_db);
    }
    assert(std::abs(10.0 * std::log10(product) - report.received_dbm) < 1e-6);
  }

  report.required_dbm = required_dbm;
  report.margin_db = report.received_dbm - report.required_dbm;
  return report;
}

LinkBudgetReport compose(double tx_power_w, std::vector<BudgetTerm> terms,
                         const ReceiverSpec& rx) {
  return compose_with_required(tx_power_w, std::move(terms),
                               required_power_dbm(rx));
}

LinkBudgetReport comm_budget(const CommLedgerInputs& in,
                             const ChannelConfig& channel,
                             const ReceiverSpec& rx) {
  const auto atmos =
      atmospheric_loss_db(channel, in.elevation_rad, in.crosses_atmosphere);
  if (!atmos) {
    auto report = unavailable_report("elevation below minimum usable elevation");
    report.required_dbm = required_power_dbm(rx);
    return report;
  }

  const double wavelength = in.tx_telescope.wavelength_m;
  const double tx_strehl = optics::strehl(in.tx_telescope.wavefront_error_waves);
  const double rx_strehl = optics::strehl(in.rx_telescope.wavefront_error_waves);
  const double divergence = optics::divergence(in.tx_telescope);

  std::vector<BudgetTerm> terms;
  terms.reserve(10);
  terms.push_back({"tx_path_efficiency", db_from_linear(in.tx_telescope.throughput),
                   TermKind::kLoss});
  terms.push_back({"tx_antenna_gain",
                   optics::antenna_gain_db(in.tx_telescope.aperture_m, wavelength),
                   TermKind::kGain});
  terms.push_back({"strehl", db_from_linear(tx_strehl), TermKind::kLoss});
  terms.push_back({"pointing_loss",
                   optics::pointing_loss_db(in.pointing_error_rad, divergence),
                   TermKind::kLoss});
  terms.push_back({"free_space_loss", free_space_loss_db(in.range_m, wavelength),
                   TermKind::kLoss});
  terms.push_back({"atmospheric_loss", *atmos, TermKind::kLoss});
  terms.push_back({"scintillation", in.scintillation_db, TermKind::kFading});
  terms.push_back({"rx_antenna_gain",
                   optics::antenna_gain_db(in.rx_telescope.aperture_m, wavelength),
                   TermKind::kGain});
  terms.push_back({"rx_path_efficiency", db_from_linear(in.rx_telescope.throughput),
                   TermKind::kLoss});
  terms.push_back(
      {"coupling_efficiency",
       db_from_linear(optics::coupling_efficiency(rx_strehl, in.coupling_base)),
       TermKind::kLoss});

  return compose(in.tx_power_w, std::move(terms), rx);
}

LinkBudgetReport beacon_budget(const BeaconLedgerInputs& in,
                               const ChannelConfig& channel) {
  const auto atmos =
      atmospheric_loss_db(channel, in.elevation_rad, in.crosses_atmosphere);
  if (!atmos) {
    auto report = unavailable_report("elevation below minimum usable elevation");
    report.required_dbm = in.detection_threshold_dbm;
    return report;
  }

  std::vector<BudgetTerm> terms;
  terms.reserve(7);
  terms.push_back({"tx_path_efficiency", db_from_linear(in.tx_path_efficiency),
                   TermKind::kLoss});
  terms.push_back({"tx_divergence_gain",
                   optics::divergence_gain_db(in.beam.divergence_rad),
                   TermKind::kGain});
  terms.push_back({"pointing_loss",
                   optics::pointing_loss_db(in.pointing_error_rad,
                                            in.beam.divergence_rad),
                   TermKind::kLoss});
  terms.push_back({"free_space_loss",
                   free_space_loss_db(in.range_m, in.wavelength_m), TermKind::kLoss});
  terms.push_back({"atmospheric_loss", *atmos, TermKind::kLoss});
  terms.push_back({"rx_antenna_gain",
                   optics::antenna_gain_db(in.rx_aperture_m, in.wavelength_m),
                   TermKind::kGain});
  terms.push_back({"rx_path_efficiency", db_from_linear(in.rx_path_efficiency),
                   TermKind::kLoss});

  return compose_with_required(in.beam.power_w, std::move(terms),
                               in.detection_threshold_dbm);
}

}  // namespace lasertwin::link_budget

#pragma once

namespace lasertwin::optics {

/// Parameters of the terminal's telescope and optical path.
///
/// Defaults describe the miniaturized 9-cm Cassegrain head: 40x magnification,
/// lambda/19 RMS wavefront error at 1550 nm and 93% total transmission. The
/// transmit beam is modeled as Gaussian with 1/e^2 half-angle
/// divergence_factor * lambda / aperture_m.
struct TelescopeSpec {
  double aperture_m = 0.09;
  double magnification = 40.0;
  double wavefront_error_waves = 1.0 / 19.0;  // RMS
  double throughput = 0.93;                   // per pass through the telescope
  double wavelength_m = 1.55e-6;
  double divergence_factor = 1.0;             // theta_w = k * lambda / D

  void validate() const;  // throws ConfigError
};

/// Transmit beam: 1/e^2 half-angle divergence plus optical power at aperture.
struct BeamModel {
  double divergence_rad = 0.0;
  double power_w = 0.0;
};

/// Strehl ratio from RMS wavefront error in waves (Marechal approximation,
/// S = exp(-(2*pi*sigma)^2)). Valid for sigma up to roughly lambda/10.
double strehl(double wavefront_error_waves);

/// Diffraction-scale transmit divergence, 1/e^2 half-angle. [rad]
double divergence(const TelescopeSpec& spec);

/// Aperture gain G = 20*log10(pi*D/lambda). [dB]
double antenna_gain_db(double aperture_m, double wavelength_m);

/// On-axis far-field gain of a Gaussian beam with 1/e^2 half-angle
/// divergence: G = 10*log10(8/theta_w^2). Used for the wide beacon beam.
double divergence_gain_db(double divergence_rad);

/// Mispointing loss of a Gaussian beam, 10*log10(exp(-2*(err/theta_w)^2)).
/// Zero at zero error, always <= 0. [dB]
double pointing_loss_db(double pointing_error_rad, double divergence_rad);

/// Single-mode fiber coupling efficiency: ideal base constant times the
/// receive-side Strehl ratio.
double coupling_efficiency(double strehl_ratio, double base);

}  // namespace lasertwin::optics

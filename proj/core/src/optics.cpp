#include "lasertwin/optics.hpp"

#include <cmath>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"

namespace lasertwin::optics {

using constants::kPi;

void TelescopeSpec::validate() const {
  if (aperture_m <= 0.0) throw ConfigError("telescope aperture_m must be > 0");
  if (magnification < 1.0) throw ConfigError("telescope magnification must be >= 1");
  if (wavefront_error_waves < 0.0)
    throw ConfigError("telescope wavefront_error_waves must be >= 0");
  if (throughput <= 0.0 || throughput > 1.0)
    throw ConfigError("telescope throughput must be in (0, 1]");
  if (wavelength_m <= 0.0) throw ConfigError("telescope wavelength_m must be > 0");
  if (divergence_factor <= 0.0)
    throw ConfigError("telescope divergence_factor must be > 0");
}

double strehl(double wavefront_error_waves) {
  const double x = 2.0 * kPi * wavefront_error_waves;
  return std::exp(-x * x);
}

double divergence(const TelescopeSpec& spec) {
  return spec.divergence_factor * spec.wavelength_m / spec.aperture_m;
}

double antenna_gain_db(double aperture_m, double wavelength_m) {
  return 20.0 * std::log10(kPi * aperture_m / wavelength_m);
}

double divergence_gain_db(double divergence_rad) {
  return 10.0 * std::log10(8.0 / (divergence_rad * divergence_rad));
}

double pointing_loss_db(double pointing_error_rad, double divergence_rad) {
  if (pointing_error_rad == 0.0) return 0.0;
  const double r = pointing_error_rad / divergence_rad;
  // 10*log10(exp(-2 r^2)) evaluated in closed form to stay finite for large r
  return -20.0 * r * r / std::log(10.0);
}

double coupling_efficiency(double strehl_ratio, double base) {
  return base * strehl_ratio;
}

}  // namespace lasertwin::optics

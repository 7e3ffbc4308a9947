#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lasertwin/constants.hpp"
#include "lasertwin/errors.hpp"
#include "lasertwin/link_budget.hpp"
#include "lasertwin/optics.hpp"

using namespace lasertwin;

TEST_CASE("strehl follows the Marechal closed form") {
  CHECK(optics::strehl(0.0) == 1.0);
  // exp(-(2*pi/19)^2) and exp(-(2*pi/14)^2), evaluated by hand
  CHECK(std::abs(optics::strehl(1.0 / 19.0) - 0.8964) < 0.0005);
  CHECK(std::abs(optics::strehl(1.0 / 19.0) - 0.8964089994855768) < 1e-12);
  CHECK(std::abs(optics::strehl(1.0 / 14.0) - 0.8176) < 0.0005);
}

TEST_CASE("strehl is monotone decreasing and vanishes for large error") {
  double prev = optics::strehl(0.0);
  for (double sigma = 0.01; sigma < 2.0; sigma += 0.01) {
    const double s = optics::strehl(sigma);
    CHECK(s < prev);
    CHECK(s > 0.0);
    prev = s;
  }
  CHECK(optics::strehl(10.0) < 1e-300);
}

TEST_CASE("divergence is the diffraction scale lambda over D") {
  optics::TelescopeSpec spec;
  CHECK(std::abs(optics::divergence(spec) - 17.2e-6) < 0.1e-6);

  optics::TelescopeSpec small = spec;
  small.aperture_m = 0.009;
  CHECK(std::abs(optics::divergence(small) - 172e-6) < 0.5e-6);
  CHECK(optics::divergence(small) == 10.0 * optics::divergence(spec));

  optics::TelescopeSpec doubled = spec;
  doubled.aperture_m = 2.0 * spec.aperture_m;
  CHECK(optics::divergence(doubled) == 0.5 * optics::divergence(spec));
}

TEST_CASE("antenna gain closed form and logarithm laws") {
  CHECK(std::abs(optics::antenna_gain_db(0.09, 1.55e-6) - 105.2) < 0.05);
  // unity gain when D = lambda / pi
  const double lambda = 1.55e-6;
  CHECK(std::abs(optics::antenna_gain_db(lambda / constants::kPi, lambda)) < 1e-12);
  const double g1 = optics::antenna_gain_db(0.09, lambda);
  const double g10 = optics::antenna_gain_db(0.9, lambda);
  CHECK(std::abs(g10 - g1 - 20.0) < 1e-9);
}

TEST_CASE("pointing loss closed form") {
  const double theta_w = 17.2e-6;
  CHECK(optics::pointing_loss_db(0.0, theta_w) == 0.0);
  CHECK(std::abs(optics::pointing_loss_db(theta_w, theta_w) - (-8.686)) < 0.001);
  CHECK(std::abs(optics::pointing_loss_db(theta_w / 2, theta_w) - (-2.171)) < 0.001);
}

TEST_CASE("pointing loss is monotone and scale invariant") {
  const double theta_w = 20e-6;
  double prev = 0.0;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int i = 1; i <= 50; ++i) {
    const double err = i * 1e-6;
    const double loss = optics::pointing_loss_db(err, theta_w);
    CHECK(loss < prev);
    prev = loss;
    const double k = scale(rng);
    CHECK(std::abs(optics::pointing_loss_db(k * err, k * theta_w) - loss) < 1e-9);
  }
}

TEST_CASE("coupling efficiency is the base times strehl") {
  CHECK(optics::coupling_efficiency(1.0, 1.0) == 1.0);
  const double s = optics::strehl(1.0 / 19.0);
  CHECK(std::abs(optics::coupling_efficiency(s, 0.81) - 0.726) < 0.001);
  CHECK(optics::coupling_efficiency(0.5 * s, 0.81) ==
        0.5 * optics::coupling_efficiency(s, 0.81));
}

TEST_CASE("antenna gain plus free-space loss depends on lambda only jointly") {
  // G(D, lambda) + L(R, lambda) = 20 log10(D / (4 R)) for any wavelength.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lambdas(0.5e-6, 11e-6);
  const double d = 0.09;
  const double range = 1.2e6;
  const double expected = 20.0 * std::log10(d / (4.0 * range));
  for (int i = 0; i < 100; ++i) {
    const double lambda = lambdas(rng);
    const double sum = optics::antenna_gain_db(d, lambda) +
                       link_budget::free_space_loss_db(range, lambda);
    CHECK(std::abs(sum - expected) < 1e-9);
  }
}

TEST_CASE("telescope spec validation rejects out-of-range values") {
  optics::TelescopeSpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.aperture_m = 0.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = {};
  spec.throughput = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = {};
  spec.magnification = 0.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

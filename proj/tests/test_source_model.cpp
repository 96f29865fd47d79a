#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heraldq/constants.hpp"
#include "heraldq/error.hpp"
#include "heraldq/source_model.hpp"

using namespace heraldq;

namespace {
const double c = kCodata2018.c;
constexpr double kOmega = 2.03e15;
constexpr double kChi = 25.2e-12;
constexpr double kLen = 50e-6;
}  // namespace

TEST_CASE("squeeze parameter") {
  const double a = amplitude_for_target_squeeze(1.0, kOmega, kChi, c, kLen);
  CHECK(squeeze_parameter(kOmega, a, kChi, c, kLen) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(squeeze_parameter(kOmega, 0.0, kChi, c, kLen) == 0.0);

  const double z1 = squeeze_parameter(kOmega, 1e5, kChi, 1e6, kLen);
  CHECK(squeeze_parameter(kOmega, 3e5, kChi, 1e6, kLen) == doctest::Approx(3 * z1).epsilon(1e-14));
  // Slower light squeezes harder.
  CHECK(squeeze_parameter(kOmega, 1e5, kChi, 5e5, kLen) == doctest::Approx(2 * z1).epsilon(1e-14));

  CHECK_THROWS_AS(squeeze_parameter(kOmega, 1e5, kChi, 0.0, kLen), DegeneracyError);
  CHECK_THROWS_AS(amplitude_for_target_squeeze(1.0, kOmega, kChi, -1.0, kLen), DegeneracyError);
}

TEST_CASE("intensity and amplitude") {
  for (double a : {1.0, 1.39e3, 5.36e5}) {
    for (double n : {1.0, 2.22}) {
      const double i = intensity_from_amplitude(a, n);
      CHECK(amplitude_from_intensity(i, n) == doctest::Approx(a).epsilon(1e-14));
    }
  }
  CHECK(intensity_from_flux(0.03, 5e-6) ==
        doctest::Approx(0.03 / (std::numbers::pi * 25e-12)).epsilon(1e-15));

  const PumpSpec p1{0.03, 5e-6, 1.0, std::nullopt};
  const PumpSpec p4{0.12, 5e-6, 1.0, std::nullopt};
  CHECK(flux_to_amplitude(p4) == doctest::Approx(2 * flux_to_amplitude(p1)).epsilon(1e-14));
  CHECK(flux_to_amplitude(p1) == doctest::Approx(5.36e5).epsilon(0.01));
}

TEST_CASE("pump consistency check") {
  PumpSpec p{0.03, 5e-6, 1.0, std::nullopt};
  CHECK_NOTHROW(p.validate());
  p.amplitude = flux_to_amplitude(p) * 1.0005;
  CHECK_NOTHROW(p.validate());
  p.amplitude = flux_to_amplitude(p) * 1.01;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = PumpSpec{-1.0, 5e-6, 1.0, std::nullopt};
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = PumpSpec{0.03, 0.0, 1.0, std::nullopt};
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("photon number") {
  const double box = pulse_volume(3.7e-9, 5e-6, PulseGeometry::box);
  const double disc = pulse_volume(3.7e-9, 5e-6, PulseGeometry::disc);
  CHECK(box == doctest::Approx(c * 3.7e-9 * 25e-12).epsilon(1e-15));
  CHECK(disc / box == doctest::Approx(std::numbers::pi).epsilon(1e-15));

  const double omega = 2 * std::numbers::pi * c / 1.535e-6;
  const double n = photon_number(1.39e3, omega, box);
  CHECK(n == doctest::Approx(7.28e3).epsilon(0.01));
  CHECK(photon_number(1.39e3, omega, 2 * box) == doctest::Approx(2 * n).epsilon(1e-14));
  CHECK(photon_number(2 * 1.39e3, omega, box) == doctest::Approx(4 * n).epsilon(1e-14));
  CHECK_THROWS_AS(photon_number(1.0, 0.0, box), ValidationError);
}

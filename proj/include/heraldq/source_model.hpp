#pragma once

#include <optional>

#include "heraldq/constants.hpp"

namespace heraldq {

/// Pump or signal beam. `amplitude` may be omitted and derived from the flux.
struct PumpSpec {
  double radiant_flux = 0.0;      ///< W
  double beam_radius = 0.0;       ///< m
  double refractive_index = 1.0;
  std::optional<double> amplitude;  ///< V/m

  /// Throws ValidationError on nonpositive values, or when a given amplitude
  /// differs from the flux-derived one by more than 0.1 %.
  void validate(const PhysicalConstants& pc = kCodata2018) const;
};

/// Pulse volume used to turn energy density into a photon count.
enum class PulseGeometry {
  box,   ///< (c tau) d d
  disc,  ///< (c tau) pi d^2
};

/// zeta = omega_s A chi2_tilde l / v_g. Throws DegeneracyError for v_g <= 0.
double squeeze_parameter(double omega_s, double amplitude, double chi2_tilde, double v_g,
                         double l_nl);

/// Amplitude A giving squeeze zeta_target; inverse of squeeze_parameter.
double amplitude_for_target_squeeze(double zeta_target, double omega_s, double chi2_tilde,
                                    double v_g, double l_nl);

/// I = W / (pi d^2).
double intensity_from_flux(double radiant_flux, double beam_radius);

/// I = eps0 c n A^2 / 2.
double intensity_from_amplitude(double amplitude, double refractive_index,
                                const PhysicalConstants& pc = kCodata2018);

/// A = sqrt(2 I / (eps0 c n)).
double amplitude_from_intensity(double intensity, double refractive_index,
                                const PhysicalConstants& pc = kCodata2018);

/// Amplitude of the beam from its flux and radius.
double flux_to_amplitude(const PumpSpec& pump, const PhysicalConstants& pc = kCodata2018);

double pulse_volume(double pulse_duration, double beam_radius, PulseGeometry geometry,
                    const PhysicalConstants& pc = kCodata2018);

/// N = 2 eps0 A^2 V / (hbar omega).
double photon_number(double amplitude, double omega, double volume,
                     const PhysicalConstants& pc = kCodata2018);

}  // namespace heraldq

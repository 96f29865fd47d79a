#include "heraldq/source_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "heraldq/error.hpp"

namespace heraldq {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(what) + " must be positive and finite");
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(what) + " must be >= 0 and finite");
}

}  // namespace

void PumpSpec::validate(const PhysicalConstants& pc) const {
  require_positive(radiant_flux, "radiant_flux");
  require_positive(beam_radius, "beam_radius");
  require_positive(refractive_index, "refractive_index");
  if (!amplitude) return;
  require_positive(*amplitude, "amplitude");
  const double derived =
      amplitude_from_intensity(intensity_from_flux(radiant_flux, beam_radius), refractive_index, pc);
  if (std::abs(*amplitude - derived) > 1e-3 * derived) {
    std::ostringstream msg;
    msg << "pump: amplitude " << *amplitude << " V/m disagrees with flux-derived " << derived
        << " V/m by more than 0.1%";
    throw ValidationError(msg.str());
  }
}

double squeeze_parameter(double omega_s, double amplitude, double chi2_tilde, double v_g,
                         double l_nl) {
  require_positive(omega_s, "omega_s");
  require_nonnegative(amplitude, "amplitude");
  require_nonnegative(chi2_tilde, "chi2_tilde");
  require_nonnegative(l_nl, "l_nl");
  if (!(v_g > 0.0))
    throw DegeneracyError("squeeze_parameter: group velocity is zero (band edge), zeta diverges");
  return omega_s * amplitude * chi2_tilde * l_nl / v_g;
}

double amplitude_for_target_squeeze(double zeta_target, double omega_s, double chi2_tilde,
                                    double v_g, double l_nl) {
  require_nonnegative(zeta_target, "zeta_target");
  require_positive(omega_s, "omega_s");
  require_positive(chi2_tilde, "chi2_tilde");
  require_positive(l_nl, "l_nl");
  if (!(v_g > 0.0))
    throw DegeneracyError("amplitude_for_target_squeeze: group velocity is zero (band edge)");
  return zeta_target * v_g / (omega_s * chi2_tilde * l_nl);
}

double intensity_from_flux(double radiant_flux, double beam_radius) {
  require_nonnegative(radiant_flux, "radiant_flux");
  require_positive(beam_radius, "beam_radius");
  return radiant_flux / (std::numbers::pi * beam_radius * beam_radius);
}

double intensity_from_amplitude(double amplitude, double refractive_index,
                                const PhysicalConstants& pc) {
  require_nonnegative(amplitude, "amplitude");
  require_positive(refractive_index, "refractive_index");
  return 0.5 * pc.eps0 * pc.c * refractive_index * amplitude * amplitude;
}

double amplitude_from_intensity(double intensity, double refractive_index,
                                const PhysicalConstants& pc) {
  require_nonnegative(intensity, "intensity");
  require_positive(refractive_index, "refractive_index");
  return std::sqrt(2.0 * intensity / (pc.eps0 * pc.c * refractive_index));
}

double flux_to_amplitude(const PumpSpec& pump, const PhysicalConstants& pc) {
  require_positive(pump.radiant_flux, "radiant_flux");
  require_positive(pump.beam_radius, "beam_radius");
  return amplitude_from_intensity(intensity_from_flux(pump.radiant_flux, pump.beam_radius),
                                  pump.refractive_index, pc);
}

double pulse_volume(double pulse_duration, double beam_radius, PulseGeometry geometry,
                    const PhysicalConstants& pc) {
  require_positive(pulse_duration, "pulse_duration");
  require_positive(beam_radius, "beam_radius");
  const double length = pc.c * pulse_duration;
  if (geometry == PulseGeometry::box) return length * beam_radius * beam_radius;
  return length * std::numbers::pi * beam_radius * beam_radius;
}

double photon_number(double amplitude, double omega, double volume,
                     const PhysicalConstants& pc) {
  require_nonnegative(amplitude, "amplitude");
  require_positive(omega, "omega");
  require_nonnegative(volume, "volume");
  return 2.0 * pc.eps0 * amplitude * amplitude * volume / (pc.hbar * omega);
}

}  // namespace heraldq

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace heraldq {

/// Two-layer periodic stack, SI units. Layer b may have zero width (a
/// homogeneous medium).
struct CrystalSpec {
  double l_a = 0.0;        ///< m
  double l_b = 0.0;        ///< m
  double eps_rel_a = 1.0;
  double eps_rel_b = 1.0;
  double chi2_tilde = 0.0; ///< m/V
  double l_nl = 0.0;       ///< m, total nonlinear length

  /// Air / LiNbO3 stack: l_a = l_b = 550 nm, n_b = 2.22,
  /// chi2_tilde = 25.2 pm/V, l = 50 um.
  static CrystalSpec air_linbo3();

  double period() const { return l_a + l_b; }
  /// Throws ValidationError on nonpositive widths, eps < 1, chi2 < 0.
  void validate() const;
};

/// Which algebraic form of the Bloch condition to evaluate.
enum class DispersionForm {
  as_printed,       ///< cos(Lk) - cos cos + (K_A^2 + K_B^2)/(2 K_A K_B) sin sin
  transfer_matrix,  ///< cos(Lk) - [cos cos - (K_A/K_B + K_B/K_A)/2 sin sin]
};

/// Bloch residual at angular frequency omega (rad/s) and wavenumber k (1/m).
/// omega = 0 is handled by its limit cos(Lk) - 1.
double dispersion_residual(const CrystalSpec& spec, double omega, double k,
                           DispersionForm form = DispersionForm::as_printed);

/// Same residual in reduced units w = omega L / (2 pi c), q = k L.
double reduced_residual(const CrystalSpec& spec, double w, double q,
                        DispersionForm form = DispersionForm::as_printed);

/// Band frequencies (rad/s) at wavenumber k, lowest first. At k = 0 the
/// first band starts at omega = 0, which is included. Touching bands
/// (tangential roots) are reported once per band.
std::vector<double> band_frequencies(const CrystalSpec& spec, double k, int n_bands,
                                     double scan_per_unit = 4000.0,
                                     DispersionForm form = DispersionForm::as_printed);

/// |d omega / dk| in m/s for band `band_index` (1-based) at k in [0, pi/L].
/// Throws DegeneracyError where d F / d omega vanishes off a band edge.
double group_velocity(const CrystalSpec& spec, int band_index, double k);

struct BandSample {
  double k = 0.0;      ///< 1/m
  double omega = 0.0;  ///< rad/s
  double v_g = 0.0;    ///< m/s
};

struct BandSolution {
  int band_index = 0;
  std::vector<BandSample> samples;
  double omega_at_zero = 0.0;    ///< k = 0
  double omega_at_boundary = 0.0;  ///< k = pi / L
};

/// `points` samples evenly spaced over k in [0, pi/L].
BandSolution sample_band(const CrystalSpec& spec, int band_index, int points = 201);

/// 1-based band holding omega (rad/s), or nullopt if omega is in a gap.
std::optional<int> band_of(const CrystalSpec& spec, double omega, int max_bands = 16);

struct TuningReport {
  int band_index = 0;
  double target_vg_over_c = 0.0;
  double k_star = 0.0;          ///< 1/m
  double omega_star = 0.0;      ///< omega(k_star), rad/s
  double omega_edge = 0.0;      ///< omega(0), rad/s
  double delta_omega = 0.0;     ///< |omega_star - omega_edge|
  double delta_nu = 0.0;        ///< delta_omega / 2 pi
  double nu_s = 0.0;            ///< signal frequency held at the k = 0 edge
  double nu_star = 0.0;         ///< omega_star / 2 pi
  double max_vg_over_c = 0.0;   ///< largest v_g/c in the band
};

/// Smallest k >= 0 in the band at which v_g reaches target_vg (m/s).
/// Throws ValidationError if the band never gets that fast.
TuningReport tune_to_group_velocity(const CrystalSpec& spec, int band_index,
                                    double target_vg);

/// Returns a note when the printed and transfer-matrix forms of the Bloch
/// condition disagree on the band edges at k = 0 for the first `n_bands`.
std::optional<std::string> dispersion_conformance_note(const CrystalSpec& spec,
                                                       int n_bands = 8);

}  // namespace heraldq

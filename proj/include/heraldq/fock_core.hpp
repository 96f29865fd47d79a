#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace heraldq {

/// Squeezed coherent light entering port a of the 50-50 beam splitter.
///
/// The state is S_a(-r) D_a(alpha) |0>. All phases (pump phase, beta phase,
/// beam-splitter phase) are fixed to zero, so the coherent amplitude is real
/// and every Fock amplitude downstream is real as well.
class SqueezedInput {
 public:
  /// Throws ValidationError unless r >= 0 and both values are finite.
  SqueezedInput(double r, double alpha);

  /// Accepts the general parameterisation and rejects anything the model does
  /// not cover: a complex alpha or any nonzero phase.
  static SqueezedInput from_general(double r, std::complex<double> alpha,
                                    double theta_phase = 0.0,
                                    double phi_phase = 0.0,
                                    double delta_phase = 0.0);

  double r() const noexcept { return r_; }
  double alpha() const noexcept { return alpha_; }

  static constexpr double theta_phase = 0.0;
  static constexpr double phi_phase = 0.0;
  static constexpr double delta_phase = 0.0;

 private:
  double r_;
  double alpha_;
};

/// Photon-number cutoff plus the probability mass allowed to fall outside it.
struct TruncationPolicy {
  int n_max = 40;
  double tail_tolerance = 1e-8;

  /// Throws ValidationError for n_max < 1 or a tolerance outside (0, 1).
  void validate() const;
};

/// Dense row-major table over (n1, n2) with 0 <= n_i <= n_max.
class FockTable {
 public:
  FockTable() = default;
  explicit FockTable(int n_max);

  int n_max() const noexcept { return n_max_; }
  int dim() const noexcept { return n_max_ + 1; }

  double operator()(int n1, int n2) const { return values_[index(n1, n2)]; }
  double& operator()(int n1, int n2) { return values_[index(n1, n2)]; }

  std::span<const double> row(int n1) const {
    return {values_.data() + index(n1, 0), static_cast<std::size_t>(dim())};
  }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t index(int n1, int n2) const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(dim()) +
           static_cast<std::size_t>(n2);
  }

  int n_max_ = -1;
  std::vector<double> values_;
};

/// Number format used by the closed-form contraction.
enum class Arithmetic { binary64, multi50, multi100 };

std::string_view to_string(Arithmetic a);

/// Joint amplitudes <n1, n2| B^dagger(0) |-r, alpha>_a |0>_b.
struct AmplitudeMatrix {
  FockTable entries;
  /// Precision the closed form ran in; always binary64 for the oracle.
  Arithmetic arithmetic = Arithmetic::binary64;
  /// Highest Fock index kept in the inner sums over l, k, m.
  int inner_cutoff = 0;
  /// Largest sum of |term| behind any entry. Rounding error is roughly this
  /// times the unit roundoff of `arithmetic`.
  double cancellation_bound = 0.0;

  int n_max() const noexcept { return entries.n_max(); }
  double operator()(int n1, int n2) const { return entries(n1, n2); }
  double captured_mass() const;
};

/// One row n1 of the amplitude matrix, with the mass that lies beyond the
/// reported columns.
struct AmplitudeRow {
  int n1 = 0;
  std::vector<double> entries;  ///< n2 = 0 .. n2_max
  double tail_mass = 0.0;       ///< sum over n2 > n2_max of |amplitude|^2
  Arithmetic arithmetic = Arithmetic::binary64;
};

/// <m| D(beta) |0> for m = 0..n_max.
std::vector<double> coherent_amplitudes(double beta, int n_max);

/// <n| S(-s) |m> for 0 <= n, m <= n_max, row-major in n. Evaluated from the
/// normal-ordered double sum, which loses accuracy to cancellation once both
/// indices pass roughly 60.
FockTable squeeze_matrix(double s, int n_max);

/// <n1, n2| S_ab(-s) |l>_a |k>_b from the normal-ordered double sum.
double two_mode_squeeze_element(int n1, int n2, int l, int k, double s);

/// Closed-form output amplitudes. Throws TruncationError when the captured
/// mass falls short of 1 - tail_tolerance.
AmplitudeMatrix output_amplitudes(const SqueezedInput& input,
                                  const TruncationPolicy& trunc);

/// A single output row, computed without the rest of the matrix.
AmplitudeRow output_row(const SqueezedInput& input, int n1, int n2_max);

/// Smallest n_max (up to n_max_cap) whose box captures 1 - tail_tolerance.
/// Throws TruncationError if the cap is not enough.
TruncationPolicy fit_truncation(const SqueezedInput& input,
                                double tail_tolerance, int n_max_cap = 400);

/// Brute-force reference: truncated ladder operators, dense matrix
/// exponentials of each generator applied in physical order (displace port a,
/// squeeze port a, beam-split). Every entry of the returned n_max box is
/// converged; the captured mass is whatever the box holds.
AmplitudeMatrix oracle_state(const SqueezedInput& input, int n_max);

}  // namespace heraldq

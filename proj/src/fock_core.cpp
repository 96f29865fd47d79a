#include "heraldq/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "closed_form.hpp"
#include "heraldq/error.hpp"

namespace heraldq {

SqueezedInput::SqueezedInput(double r, double alpha) : r_(r), alpha_(alpha) {
  if (!std::isfinite(r) || !std::isfinite(alpha))
    throw ValidationError("squeezed input: r and alpha must be finite");
  if (r < 0.0) throw ValidationError("squeezed input: r must be >= 0");
}

SqueezedInput SqueezedInput::from_general(double r, std::complex<double> alpha,
                                          double theta_phase, double phi_phase,
                                          double delta_phase) {
  if (alpha.imag() != 0.0)
    throw ValidationError("squeezed input: complex alpha is not supported");
  if (theta_phase != 0.0 || phi_phase != 0.0 || delta_phase != 0.0)
    throw ValidationError("squeezed input: phases theta, phi, delta must be zero");
  return SqueezedInput(r, alpha.real());
}

void TruncationPolicy::validate() const {
  if (n_max < 1) throw ValidationError("truncation: n_max must be >= 1");
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
    throw ValidationError("truncation: tail_tolerance must lie in (0, 1)");
}

FockTable::FockTable(int n_max)
    : n_max_(n_max),
      values_(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(n_max + 1),
              0.0) {
  if (n_max < 0) throw ValidationError("FockTable: negative n_max");
}

std::string_view to_string(Arithmetic a) {
  switch (a) {
    case Arithmetic::binary64: return "binary64";
    case Arithmetic::multi50: return "multiprecision-50";
    case Arithmetic::multi100: return "multiprecision-100";
  }
  return "unknown";
}

double AmplitudeMatrix::captured_mass() const {
  double mass = 0.0;
  for (double a : entries.values()) mass += a * a;
  return mass;
}

std::vector<double> coherent_amplitudes(double beta, int n_max) {
  if (n_max < 0) throw ValidationError("coherent_amplitudes: n_max must be >= 0");
  std::vector<double> d(static_cast<std::size_t>(n_max) + 1, 0.0);
  d[0] = std::exp(-0.5 * beta * beta);
  for (int m = 1; m <= n_max; ++m) d[m] = d[m - 1] * beta / std::sqrt(static_cast<double>(m));
  return d;
}

namespace {

double log_fact(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

FockTable squeeze_matrix(double s, int n_max) {
  if (!(s >= 0.0)) throw ValidationError("squeeze_matrix: s must be >= 0");
  FockTable out(n_max);
  const double t = std::tanh(s);
  const double log_ch = std::log(std::cosh(s));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      double sum = 0.0;
      for (int l = 0; l <= n / 2; ++l) {
        for (int k = 0; k <= m / 2; ++k) {
          if (n - 2 * l != m - 2 * k) continue;
          if (t == 0.0 && k + l > 0) continue;
          const double lg = -log_fact(l) - log_fact(k) +
                            (k + l) * (t > 0.0 ? std::log(0.5 * t) : 0.0) +
                            0.5 * (log_fact(m) + log_fact(n) - log_fact(n - 2 * l) -
                                   log_fact(m - 2 * k)) -
                            0.5 * (1 + 2 * (m - 2 * k)) * log_ch;
          sum += (k % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
        }
      }
      out(n, m) = sum;
    }
  }
  return out;
}

double two_mode_squeeze_element(int n1, int n2, int l, int k, double s) {
  if (n1 < 0 || n2 < 0 || l < 0 || k < 0)
    throw ValidationError("two_mode_squeeze_element: negative Fock index");
  if (!(s >= 0.0)) throw ValidationError("two_mode_squeeze_element: s must be >= 0");
  const double t = std::tanh(s);
  const double log_ch = std::log(std::cosh(s));
  double sum = 0.0;
  for (int n = 0; n <= std::min(n1, n2); ++n) {
    for (int m = 0; m <= std::min(l, k); ++m) {
      if (l - m != n1 - n || k - m != n2 - n) continue;
      if (t == 0.0 && m + n > 0) continue;
      const double lg = (m + n) * (t > 0.0 ? std::log(t) : 0.0) - log_fact(m) -
                        log_fact(n) - (l + k - 2 * m + 1) * log_ch +
                        0.5 * (log_fact(l) + log_fact(k) + log_fact(n1) + log_fact(n2)) -
                        log_fact(l - m) - log_fact(k - m);
      sum += (m % 2 == 0 ? 1.0 : -1.0) * std::exp(lg);
    }
  }
  return sum;
}

AmplitudeMatrix output_amplitudes(const SqueezedInput& input, const TruncationPolicy& trunc) {
  trunc.validate();
  const auto c = detail::contract({.r = input.r(),
                                   .alpha = input.alpha(),
                                   .row_first = 0,
                                   .row_last = trunc.n_max,
                                   .col_max = trunc.n_max});
  AmplitudeMatrix out;
  out.entries = FockTable(trunc.n_max);
  for (int n1 = 0; n1 <= trunc.n_max; ++n1)
    for (int n2 = 0; n2 <= trunc.n_max; ++n2) out.entries(n1, n2) = c.at(n1, n2);
  out.arithmetic = c.arithmetic;
  out.inner_cutoff = c.inner_cutoff;
  out.cancellation_bound = c.cancellation_bound;

  const double mass = out.captured_mass();
  if (1.0 - mass > trunc.tail_tolerance) {
    std::ostringstream msg;
    msg << "truncation failure: n_max=" << trunc.n_max << " captures mass " << mass
        << " (tail " << 1.0 - mass << " > tolerance " << trunc.tail_tolerance
        << ") at r=" << input.r() << ", alpha=" << input.alpha();
    throw TruncationError(msg.str());
  }
  return out;
}

AmplitudeRow output_row(const SqueezedInput& input, int n1, int n2_max) {
  if (n1 < 0 || n2_max < 0) throw ValidationError("output_row: negative index");
  const auto c = detail::contract(
      {.r = input.r(), .alpha = input.alpha(), .row_first = n1, .row_last = n1, .col_max = n2_max});
  AmplitudeRow row;
  row.n1 = n1;
  row.arithmetic = c.arithmetic;
  row.entries.resize(static_cast<std::size_t>(n2_max) + 1);
  double kept = 0.0;
  for (int n2 = 0; n2 <= n2_max; ++n2) {
    row.entries[n2] = c.at(n1, n2);
    kept += row.entries[n2] * row.entries[n2];
  }

  // Marginal of port a: each of m input photons reaches it with probability 1/2.
  const auto total = detail::input_number_distribution(input.r(), input.alpha());
  double marginal = 0.0;
  for (std::size_t m = static_cast<std::size_t>(n1); m < total.size(); ++m) {
    const double mm = static_cast<double>(m);
    marginal += total[m] * std::exp(std::lgamma(mm + 1.0) - log_fact(n1) -
                                    std::lgamma(mm - n1 + 1.0) - mm * std::numbers::ln2);
  }
  row.tail_mass = std::max(0.0, marginal - kept);
  return row;
}

TruncationPolicy fit_truncation(const SqueezedInput& input, double tail_tolerance,
                                int n_max_cap) {
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
    throw ValidationError("fit_truncation: tail_tolerance must lie in (0, 1)");
  const auto total = detail::input_number_distribution(input.r(), input.alpha());

  std::vector<double> lf(total.size() + 1, 0.0);
  for (std::size_t j = 1; j < lf.size(); ++j) lf[j] = lf[j - 1] + std::log(static_cast<double>(j));

  // A total of m photons leaves the splitter as Binomial(m, 1/2) across the two
  // ports, so the mass outside the box [0, n]^2 follows from the totals alone.
  auto outside = [&](int n) {
    double out = 0.0;
    for (std::size_t m = static_cast<std::size_t>(n) + 1; m < total.size(); ++m) {
      if (total[m] == 0.0) continue;
      const int mm = static_cast<int>(m);
      // Port a keeps j photons; both ports fit iff m - n <= j <= n.
      const int lo = mm - n;
      double inside = 0.0;
      for (int j = lo; j <= n; ++j)
        inside += std::exp(lf[m] - lf[j] - lf[m - j] - mm * std::numbers::ln2);
      out += total[m] * std::max(0.0, 1.0 - inside);
    }
    return out;
  };

  // Leave half the budget for rounding in the closed form. The outside mass
  // only shrinks as the box grows, so bisect on n.
  const double budget = 0.5 * tail_tolerance;
  if (outside(n_max_cap) <= budget) {
    int lo = 0, hi = n_max_cap;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (outside(mid) <= budget ? hi : lo) = mid;
    }
    return TruncationPolicy{std::max(hi, 1), tail_tolerance};
  }
  std::ostringstream msg;
  msg << "fit_truncation: n_max cap " << n_max_cap << " leaves tail " << outside(n_max_cap)
      << " at r=" << input.r() << ", alpha=" << input.alpha();
  throw TruncationError(msg.str());
}

}  // namespace heraldq

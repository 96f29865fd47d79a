#include "closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "heraldq/error.hpp"

namespace heraldq::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

// Terms below exp(-kNegligibleLog) relative to the largest are dropped from
// the series in k (coherent-state expansion).
constexpr double kNegligibleLog = 276.0;  // ~1e-120

// Inner cutoff grows until the last term of every annihilation sum is below
// this absolute size.
constexpr double kBoundaryTerm = 1e-30;

constexpr int kMaxInnerCutoff = 6000;

// Target absolute accuracy of each amplitude.
constexpr double kTargetError = 1e-13;

/// Running sum of signed terms given as (log|x|, sign) without overflow.
class SignedLogSum {
 public:
  void add(double log_mag, int sign) {
    if (sign == 0 || log_mag == kNegInf) return;
    if (log_mag > max_) {
      sum_ *= std::exp(max_ - log_mag);
      max_ = log_mag;
    }
    sum_ += sign * std::exp(log_mag - max_);
  }
  double log_abs() const {
    return sum_ == 0.0 ? kNegInf : max_ + std::log(std::abs(sum_));
  }
  int sign() const { return sum_ > 0 ? 1 : (sum_ < 0 ? -1 : 0); }
  double max_log() const { return max_; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

struct Params {
  double s;        // squeeze magnitude
  double t;        // tanh(s)
  double log_t;    // -inf when t == 0
  double log_ch;   // ln cosh(s)
  double beta;     // real displacement
  int k_terms;     // number of terms kept in the k series
};

/// Parameters of S(-s) D(beta) |0> on one mode.
Params make_params(double s, double beta) {
  Params p{};
  p.s = s;
  p.t = std::tanh(p.s);
  p.log_t = p.t > 0.0 ? std::log(p.t) : kNegInf;
  p.log_ch = std::log(std::cosh(p.s));
  p.beta = beta;
  // (t beta^2 / 2)^k / k! falls below 1e-120 of its peak well before this.
  const double x = 0.5 * p.t * p.beta * p.beta;
  int k = 0;
  double log_term = 0.0;
  double peak = 0.0;
  while (true) {
    ++k;
    if (x == 0.0) break;
    log_term += std::log(x) - std::log(static_cast<double>(k));
    peak = std::max(peak, log_term);
    if (static_cast<double>(k) > x && log_term < peak - kNegligibleLog) break;
  }
  p.k_terms = k + 1;
  return p;
}

/// ln(n!) for n = 0..size-1.
std::vector<double> log_factorials(int size) {
  std::vector<double> lf(static_cast<std::size_t>(size));
  for (int n = 0; n < size; ++n) lf[n] = std::lgamma(static_cast<double>(n) + 1.0);
  return lf;
}

/// C_n = sum_m S_nm D_m in signed-log form, for n = 0..count-1.
///
/// With j = n - 2l = m - 2k the Kronecker delta in S_nm is resolved and the
/// double sum splits into an inner series over k (the D-side) and an outer
/// finite sum over l.
void squeezed_coherent_logs(const Params& p, int count,
                            std::vector<double>& log_c, std::vector<int>& sign_c) {
  const int top = count + 2 * p.k_terms + 2;
  const auto lf = log_factorials(top + 1);

  auto log_d = [&](int m, int& sign) {
    if (p.beta == 0.0) {
      sign = m == 0 ? 1 : 0;
      return m == 0 ? 0.0 : kNegInf;
    }
    sign = (p.beta < 0.0 && (m % 2) != 0) ? -1 : 1;
    return -0.5 * p.beta * p.beta + m * std::log(std::abs(p.beta)) - 0.5 * lf[m];
  };

  std::vector<double> log_y(static_cast<std::size_t>(count));
  std::vector<int> sign_y(static_cast<std::size_t>(count));
  const double log_half_t = p.log_t - kLn2;
  for (int j = 0; j < count; ++j) {
    SignedLogSum y;
    for (int k = 0; k < p.k_terms; ++k) {
      if (k > 0 && p.t == 0.0) break;
      int sd = 0;
      const double ld = log_d(j + 2 * k, sd);
      const double coeff = (k == 0 ? 0.0 : k * log_half_t) - lf[k] +
                           0.5 * (lf[j + 2 * k] - lf[j]);
      y.add(coeff + ld, (k % 2 == 0 ? 1 : -1) * sd);
    }
    log_y[j] = y.log_abs();
    sign_y[j] = y.sign();
  }

  log_c.assign(static_cast<std::size_t>(count), kNegInf);
  sign_c.assign(static_cast<std::size_t>(count), 0);
  for (int n = 0; n < count; ++n) {
    SignedLogSum c;
    for (int l = 0; 2 * l <= n; ++l) {
      if (l > 0 && p.t == 0.0) break;
      const int j = n - 2 * l;
      const double coeff = (l == 0 ? 0.0 : l * log_half_t) - lf[l] +
                           0.5 * (lf[n] - lf[j]) - (j + 0.5) * p.log_ch;
      c.add(coeff + log_y[j], sign_y[j]);
    }
    log_c[n] = c.log_abs();
    sign_c[n] = c.sign();
  }
}

/// Smallest index past which |C_j|^2 stays below 1e-44 for a full window.
int coefficient_support(const Params& p, int at_least) {
  constexpr double kLogTiny = -101.0;  // ln(1e-44)
  constexpr int kWindow = 24;
  int count = std::max(64, at_least + kWindow + 1);
  std::vector<double> log_c;
  std::vector<int> sign_c;
  while (true) {
    squeezed_coherent_logs(p, count, log_c, sign_c);
    int last_big = -1;
    for (int j = 0; j < count; ++j)
      if (2.0 * log_c[j] > kLogTiny) last_big = j;
    if (last_big + kWindow < count) return std::max(last_big + kWindow, at_least);
    if (count >= kMaxInnerCutoff)
      throw TruncationError("squeezed-coherent coefficients do not decay within " +
                            std::to_string(kMaxInnerCutoff) + " Fock states");
    count = std::min(kMaxInnerCutoff, count * 3 / 2);
  }
}

struct DoublePass {
  std::vector<double> values;
  double abs_max = 0.0;
  double boundary_max = 0.0;
  bool finite = true;
};

DoublePass run_binary64(const Params& p, int inner, int row_first, int row_last,
                        int cols) {
  std::vector<double> log_c;
  std::vector<int> sign_c;
  squeezed_coherent_logs(p, inner + 1, log_c, sign_c);
  const auto lf = log_factorials(inner + cols + row_last + 2);

  const int p_dim = row_last + 1;
  std::vector<double> w(static_cast<std::size_t>(p_dim) * cols, 0.0);
  std::vector<double> w_abs(w.size(), 0.0);
  DoublePass out;

  // Annihilation stage: W(p, q) = sum_m (-t)^m / m! sqrt((p+m)!(q+m)!/(p! q!))
  //                               C_{p+m} C_{q+m}
  for (int pp = 0; pp < p_dim; ++pp) {
    for (int q = 0; q < cols; ++q) {
      double sum = 0.0, abs_sum = 0.0, last = 0.0;
      const int m_top = inner - std::max(pp, q);
      for (int m = 0; m <= m_top; ++m) {
        if (m > 0 && p.t == 0.0) break;
        const int sc = sign_c[pp + m] * sign_c[q + m];
        if (sc == 0) continue;
        const double lg = (m == 0 ? 0.0 : m * p.log_t) - lf[m] +
                          0.5 * (lf[pp + m] + lf[q + m] - lf[pp] - lf[q]) +
                          log_c[pp + m] + log_c[q + m];
        const double term = std::exp(lg);
        sum += (m % 2 == 0 ? sc : -sc) * term;
        abs_sum += term;
        last = term;
      }
      if (m_top >= 0 && p.t > 0.0) out.boundary_max = std::max(out.boundary_max, last);
      w[static_cast<std::size_t>(pp) * cols + q] = sum;
      w_abs[static_cast<std::size_t>(pp) * cols + q] = abs_sum;
    }
  }

  // Creation stage with the diagonal ln cosh factor folded in.
  const int rows = row_last - row_first + 1;
  out.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  for (int n1 = row_first; n1 <= row_last; ++n1) {
    for (int n2 = 0; n2 < cols; ++n2) {
      double sum = 0.0, abs_sum = 0.0;
      for (int n = 0; n <= std::min(n1, n2); ++n) {
        if (n > 0 && p.t == 0.0) break;
        const int a = n1 - n, b = n2 - n;
        const double lg = (n == 0 ? 0.0 : n * p.log_t) - lf[n] +
                          0.5 * (lf[n1] + lf[n2] - lf[a] - lf[b]) -
                          (a + b + 1) * p.log_ch;
        const double f = std::exp(lg);
        sum += f * w[static_cast<std::size_t>(a) * cols + b];
        abs_sum += f * w_abs[static_cast<std::size_t>(a) * cols + b];
      }
      out.values[static_cast<std::size_t>(n1 - row_first) * cols + n2] = sum;
      out.abs_max = std::max(out.abs_max, abs_sum);
      if (!std::isfinite(sum) || !std::isfinite(abs_sum)) out.finite = false;
    }
  }
  return out;
}

/// Same sums as run_binary64, evaluated directly in extended precision.
template <class Real>
std::vector<double> run_extended(const Params& p, double r, double alpha, int inner,
                                 int row_first, int row_last, int cols) {
  using std::cosh;
  using std::exp;
  using std::sqrt;
  using std::tanh;

  const Real s = Real(r) / 2;
  const Real t = tanh(s);
  const Real ch = cosh(s);
  const Real beta = Real(alpha) / sqrt(Real(2));
  const int k_terms = p.t == 0.0 ? 1 : p.k_terms;
  const int top = std::max(inner + cols, inner + 2 * k_terms) + row_last + 2;

  std::vector<Real> sf(top + 1), inv_fact(top + 1);
  sf[0] = 1;
  inv_fact[0] = 1;
  for (int j = 1; j <= top; ++j) {
    sf[j] = sf[j - 1] * sqrt(Real(j));
    inv_fact[j] = inv_fact[j - 1] / j;
  }
  std::vector<Real> inv_ch_pow(2 * (inner + cols) + 4);
  inv_ch_pow[0] = 1;
  for (std::size_t j = 1; j < inv_ch_pow.size(); ++j) inv_ch_pow[j] = inv_ch_pow[j - 1] / ch;
  const Real inv_sqrt_ch = 1 / sqrt(ch);

  const int d_top = inner + 2 * k_terms + 1;
  std::vector<Real> d(d_top + 1);
  {
    const Real pref = exp(-beta * beta / 2);
    Real bp = 1;
    for (int m = 0; m <= d_top; ++m) {
      d[m] = pref * bp / sf[m];
      bp *= beta;
    }
  }

  std::vector<Real> half_t_pow(std::max(k_terms, inner / 2 + 2) + 1);
  half_t_pow[0] = 1;
  for (std::size_t j = 1; j < half_t_pow.size(); ++j) half_t_pow[j] = half_t_pow[j - 1] * t / 2;

  std::vector<Real> y(inner + 1);
  for (int j = 0; j <= inner; ++j) {
    Real acc = 0;
    for (int k = 0; k < k_terms; ++k) {
      Real term = half_t_pow[k] * inv_fact[k] * sf[j + 2 * k] / sf[j] * d[j + 2 * k];
      if (k % 2 != 0) term = -term;
      acc += term;
    }
    y[j] = acc;
  }

  // u_j = sqrt(j!) C_j
  std::vector<Real> u(inner + 1);
  for (int n = 0; n <= inner; ++n) {
    Real acc = 0;
    for (int l = 0; 2 * l <= n; ++l) {
      const int j = n - 2 * l;
      acc += half_t_pow[l] * inv_fact[l] * sf[n] / sf[j] * inv_ch_pow[j] * y[j];
    }
    u[n] = sf[n] * acc * inv_sqrt_ch;
  }

  std::vector<Real> g(inner + 1), h(top + 1);
  {
    Real tp = 1;
    for (int m = 0; m <= inner; ++m) {
      g[m] = (m % 2 == 0 ? tp : Real(-tp)) * inv_fact[m];
      tp *= t;
    }
    tp = 1;
    for (int n = 0; n <= top; ++n) {
      h[n] = tp * inv_fact[n];
      tp *= t;
    }
  }

  const int p_dim = row_last + 1;
  std::vector<Real> v(static_cast<std::size_t>(p_dim) * cols);
  for (int pp = 0; pp < p_dim; ++pp) {
    for (int q = 0; q < cols; ++q) {
      Real acc = 0;
      const int m_top = inner - std::max(pp, q);
      for (int m = 0; m <= m_top; ++m) acc += g[m] * u[pp + m] * u[q + m];
      const Real norm = sf[pp] * sf[q];
      v[static_cast<std::size_t>(pp) * cols + q] = inv_ch_pow[pp + q + 1] * acc / (norm * norm);
    }
  }

  const int rows = row_last - row_first + 1;
  std::vector<double> out(static_cast<std::size_t>(rows) * cols);
  for (int n1 = row_first; n1 <= row_last; ++n1) {
    for (int n2 = 0; n2 < cols; ++n2) {
      Real acc = 0;
      for (int n = 0; n <= std::min(n1, n2); ++n)
        acc += h[n] * v[static_cast<std::size_t>(n1 - n) * cols + (n2 - n)];
      out[static_cast<std::size_t>(n1 - row_first) * cols + n2] =
          static_cast<double>(sf[n1] * sf[n2] * acc);
    }
  }
  return out;
}

}  // namespace

Contraction contract(const ContractionRequest& request) {
  if (request.row_first < 0 || request.row_last < request.row_first || request.col_max < 0)
    throw ValidationError("contraction block out of range");
  // Each output port sees S(-r/2) D(alpha/sqrt 2).
  const Params p = make_params(0.5 * request.r, request.alpha / std::sqrt(2.0));

  const int wanted = std::max(request.col_max, request.row_last);
  int inner = coefficient_support(p, wanted);
  const int cols = request.col_max + 1;

  DoublePass pass;
  while (true) {
    pass = run_binary64(p, inner, request.row_first, request.row_last, cols);
    if (pass.boundary_max <= kBoundaryTerm || !pass.finite) break;
    if (inner >= kMaxInnerCutoff)
      throw TruncationError("inner Fock sums did not converge below cutoff " +
                            std::to_string(kMaxInnerCutoff));
    inner = std::min(kMaxInnerCutoff, inner * 3 / 2);
  }

  Contraction result;
  result.row_first = request.row_first;
  result.rows = request.row_last - request.row_first + 1;
  result.cols = cols;
  result.inner_cutoff = inner;
  result.cancellation_bound = pass.abs_max;

  namespace mp = boost::multiprecision;
  const double bound = pass.finite ? pass.abs_max : std::numeric_limits<double>::infinity();
  if (bound * 4.0 * std::numeric_limits<double>::epsilon() <= kTargetError) {
    result.values = std::move(pass.values);
    result.arithmetic = Arithmetic::binary64;
  } else if (bound * 4e-49 <= kTargetError) {
    result.values = run_extended<mp::cpp_bin_float_50>(
        p, request.r, request.alpha, inner, request.row_first, request.row_last, cols);
    result.arithmetic = Arithmetic::multi50;
  } else if (bound * 4e-99 <= kTargetError) {
    result.values = run_extended<mp::cpp_bin_float_100>(
        p, request.r, request.alpha, inner, request.row_first, request.row_last, cols);
    result.arithmetic = Arithmetic::multi100;
  } else {
    throw DegeneracyError("closed-form sums cancel beyond 100 significant digits (r=" +
                          std::to_string(request.r) + ", alpha=" +
                          std::to_string(request.alpha) + ")");
  }
  return result;
}

std::vector<double> input_number_distribution(double r, double alpha) {
  const Params p = make_params(r, alpha);
  const int support = coefficient_support(p, 0);
  std::vector<double> log_c;
  std::vector<int> sign_c;
  squeezed_coherent_logs(p, support + 1, log_c, sign_c);
  std::vector<double> probs(log_c.size());
  for (std::size_t m = 0; m < log_c.size(); ++m) probs[m] = std::exp(2.0 * log_c[m]);
  return probs;
}

}  // namespace heraldq::detail

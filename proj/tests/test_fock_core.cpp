#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "heraldq/error.hpp"
#include "heraldq/fock_core.hpp"

using namespace heraldq;
using Eigen::MatrixXd;

namespace {

MatrixXd ladder(int dim) {
  MatrixXd a = MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

// exp(s/2 (a^dag^2 - a^2)) on a truncated space.
MatrixXd squeeze_oracle(double s, int dim) {
  const MatrixXd a = ladder(dim);
  const MatrixXd ad = a.transpose();
  return (0.5 * s * (ad * ad - a * a)).exp();
}

// exp(s (a^dag b^dag - a b)) on two truncated modes, index i * dim + j.
MatrixXd two_mode_oracle(double s, int dim) {
  const MatrixXd a = ladder(dim);
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  MatrixXd A(dim * dim, dim * dim), B(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          A(i * dim + k, j * dim + l) = a(i, j) * id(k, l);
          B(i * dim + k, j * dim + l) = id(i, j) * a(k, l);
        }
  const MatrixXd gen = s * (A.transpose() * B.transpose() - A * B);
  return gen.exp();
}

double poisson(double mean, int n) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

double binom_half(int k, int m) {
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) -
                  m * std::log(2.0));
}

}  // namespace

TEST_CASE("squeezed input validation") {
  CHECK_THROWS_AS(SqueezedInput(-0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(SqueezedInput(std::nan(""), 0.5), ValidationError);
  CHECK_THROWS_AS(SqueezedInput::from_general(1.0, {0.5, 0.1}), ValidationError);
  CHECK_THROWS_AS(SqueezedInput::from_general(1.0, 0.5, 0.2), ValidationError);
  CHECK_THROWS_AS(SqueezedInput::from_general(1.0, 0.5, 0.0, 0.0, 0.3), ValidationError);
  const auto in = SqueezedInput::from_general(1.0, 0.5);
  CHECK(in.r() == 1.0);
  CHECK(in.alpha() == 0.5);
  CHECK_THROWS_AS((TruncationPolicy{0, 1e-8}.validate()), ValidationError);
  CHECK_THROWS_AS((TruncationPolicy{10, 0.0}.validate()), ValidationError);
}

TEST_CASE("coherent amplitudes") {
  const auto vac = coherent_amplitudes(0.0, 4);
  CHECK(vac == std::vector<double>{1, 0, 0, 0, 0});
  const auto d = coherent_amplitudes(0.5 / std::sqrt(2.0), 3);
  CHECK(d[0] == doctest::Approx(std::exp(-1.0 / 16.0)).epsilon(1e-14));
  CHECK(d[0] == doctest::Approx(0.93941).epsilon(1e-5));
  for (double beta : {0.1, 0.5, 1.0, 2.0, -1.5}) {
    double sum = 0.0;
    for (double x : coherent_amplitudes(beta, 60)) sum += x * x;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("single-mode squeeze matrix") {
  const auto id = squeeze_matrix(0.0, 6);
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m) CHECK(id(n, m) == (n == m ? 1.0 : 0.0));

  const auto s = squeeze_matrix(0.5, 20);
  CHECK(s(0, 0) == doctest::Approx(1.0 / std::sqrt(std::cosh(0.5))).epsilon(1e-13));
  CHECK(s(0, 0) == doctest::Approx(0.941711).epsilon(1e-6));

  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m)
      if ((n - m) % 2 != 0) CHECK(s(n, m) == 0.0);

  // Squeezed-vacuum column in closed form.
  const double t = std::tanh(0.5), ch = std::cosh(0.5);
  for (int l = 0; 2 * l <= 20; ++l) {
    const double want = std::pow(t, l) *
                        std::exp(0.5 * std::lgamma(2 * l + 1.0) - std::lgamma(l + 1.0)) /
                        (std::pow(2.0, l) * std::sqrt(ch));
    CHECK(std::abs(std::abs(s(2 * l, 0)) - want) < 1e-10);
  }

  // Signed agreement with the operator exponential, including phases.
  const MatrixXd orc = squeeze_oracle(0.5, 160);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m) worst = std::max(worst, std::abs(s(n, m) - orc(n, m)));
  CHECK(worst < 1e-10);
}

TEST_CASE("two-mode squeeze element") {
  for (int n1 = 0; n1 < 4; ++n1)
    for (int n2 = 0; n2 < 4; ++n2)
      for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
          CHECK(two_mode_squeeze_element(n1, n2, l, k, 0.0) == ((n1 == l && n2 == k) ? 1.0 : 0.0));

  CHECK(two_mode_squeeze_element(0, 0, 0, 0, 0.5) ==
        doctest::Approx(1.0 / std::cosh(0.5)).epsilon(1e-14));
  CHECK(two_mode_squeeze_element(0, 0, 0, 0, 0.5) == doctest::Approx(0.88682).epsilon(1e-5));
  CHECK(two_mode_squeeze_element(3, 1, 1, 0, 0.4) == 0.0);
  CHECK(two_mode_squeeze_element(2, 1, 4, 2, 0.4) == 0.0);

  const int dim = 22;
  const MatrixXd orc = two_mode_oracle(0.5, dim);
  double worst = 0.0;
  for (int n1 = 0; n1 <= 5; ++n1)
    for (int n2 = 0; n2 <= 5; ++n2)
      for (int l = 0; l <= 5; ++l)
        for (int k = 0; k <= 5; ++k)
          worst = std::max(worst, std::abs(two_mode_squeeze_element(n1, n2, l, k, 0.5) -
                                           orc(n1 * dim + n2, l * dim + k)));
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(two_mode_squeeze_element(-1, 0, 0, 0, 0.5), ValidationError);
}

TEST_CASE("output amplitudes: trivial inputs") {
  const auto vac = output_amplitudes(SqueezedInput(0.0, 0.0), TruncationPolicy{4, 1e-8});
  CHECK(vac(0, 0) == doctest::Approx(1.0));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      if (a + b > 0) CHECK(vac(a, b) == 0.0);

  // Coherent light splits into two independent beams of mean alpha^2 / 2.
  const auto coh = output_amplitudes(SqueezedInput(0.0, 0.5), TruncationPolicy{12, 1e-8});
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b)
      CHECK(std::abs(coh(a, b) * coh(a, b) - poisson(0.125, a) * poisson(0.125, b)) < 1e-10);
}

TEST_CASE("output amplitudes at r=1, alpha=1/2") {
  const SqueezedInput in(1.0, 0.5);
  const auto amp = output_amplitudes(in, fit_truncation(in, 1e-8));
  CHECK(amp(0, 0) * amp(0, 0) == doctest::Approx(0.417).epsilon(0.002 / 0.417));
  CHECK(amp.arithmetic == Arithmetic::binary64);

  // Default cutoff holds too little of this state.
  CHECK_THROWS_AS(output_amplitudes(in, TruncationPolicy{}), TruncationError);
  CHECK_THROWS_AS(output_amplitudes(in, TruncationPolicy{8, 1e-8}), TruncationError);
}

TEST_CASE("number conservation fixes the joint distribution") {
  // Verbatim single-mode matrices give the photon-number law entering port a;
  // a 50-50 splitter then sends each photon either way with probability 1/2.
  for (auto [r, alpha] : {std::pair{1.0, 0.5}, std::pair{0.6, 1.0}, std::pair{1.0, 0.0}}) {
    const SqueezedInput in(r, alpha);
    const auto amp = output_amplitudes(in, fit_truncation(in, 1e-8));
    const int m_max = 50;
    const auto s = squeeze_matrix(r, m_max);
    const auto d = coherent_amplitudes(alpha, m_max);
    std::vector<double> total(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
      double c = 0.0;
      for (int k = 0; k <= m_max; ++k) c += s(m, k) * d[k];
      total[m] = c * c;
    }
    double worst = 0.0;
    for (int a = 0; a <= 15; ++a)
      for (int b = 0; a + b <= 30 && b <= amp.n_max(); ++b)
        worst = std::max(worst, std::abs(amp(a, b) * amp(a, b) - total[a + b] * binom_half(a, a + b)));
    INFO("r=" << r << " alpha=" << alpha);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("oracle state") {
  const auto vac = oracle_state(SqueezedInput(0.0, 0.0), 3);
  CHECK(vac(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const SqueezedInput in(1.0, 0.5);
  const auto orc = oracle_state(in, 40);
  TruncationPolicy trunc = fit_truncation(in, 1e-8);
  trunc.n_max = std::max(trunc.n_max, 40);
  const auto cf = output_amplitudes(in, trunc);
  double worst = 0.0;
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b) worst = std::max(worst, std::abs(cf(a, b) - orc(a, b)));
  CHECK(worst < 1e-8);

  const auto sqv = oracle_state(SqueezedInput(1.0, 0.0), 20);
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b)
      if ((a + b) % 2) CHECK(std::abs(sqv(a, b)) < 1e-14);
}

TEST_CASE("property grid: normalization, symmetry, parity") {
  for (double r : {0.0, 0.5, 1.0, 1.5}) {
    for (double alpha : {0.0, 0.25, 1.0}) {
      CAPTURE(r);
      CAPTURE(alpha);
      const SqueezedInput in(r, alpha);
      const auto amp = output_amplitudes(in, fit_truncation(in, 1e-8));
      const double mass = amp.captured_mass();
      CHECK(mass >= 1.0 - 1e-8);
      CHECK(mass <= 1.0 + 1e-12);
      double asym = 0.0;
      for (int a = 0; a <= amp.n_max(); ++a)
        for (int b = 0; b < a; ++b) {
          asym = std::max(asym, std::abs(amp(a, b) - amp(b, a)));
          if (alpha == 0.0 && (a + b) % 2) CHECK(amp(a, b) == 0.0);
        }
      CHECK(asym <= 1e-12);
    }
  }
}

TEST_CASE("multiprecision escalation") {
  const SqueezedInput in(1.5, 0.5);
  const auto amp = output_amplitudes(in, fit_truncation(in, 1e-8));
  CHECK(amp.arithmetic != Arithmetic::binary64);
  CHECK(amp.cancellation_bound > 1e3);
  CHECK(amp.captured_mass() >= 1.0 - 1e-8);
  CHECK(amp.captured_mass() <= 1.0 + 1e-12);
}

TEST_CASE("fit_truncation and single rows") {
  const SqueezedInput in(1.0, 0.5);
  const auto trunc = fit_truncation(in, 1e-8);
  CHECK(trunc.n_max > 40);
  CHECK_NOTHROW(output_amplitudes(in, trunc));
  CHECK_THROWS_AS(fit_truncation(SqueezedInput(2.0, 1.0), 1e-8, 50), TruncationError);

  const auto full = output_amplitudes(in, trunc);
  const auto row = output_row(in, 1, trunc.n_max);
  double tail = 0.0;
  for (int b = 0; b <= trunc.n_max; ++b) CHECK(std::abs(row.entries[b] - full(1, b)) < 1e-14);
  const auto wide = output_row(in, 1, 3 * trunc.n_max);
  for (int b = trunc.n_max + 1; b <= 3 * trunc.n_max; ++b) tail += wide.entries[b] * wide.entries[b];
  CHECK(std::abs(row.tail_mass - tail) < 1e-12);
}

#include <doctest.h>

#include <cmath>

#include "heraldq/error.hpp"
#include "heraldq/photon_stats.hpp"

using namespace heraldq;

namespace {

const JointDistribution& reference() {
  static const JointDistribution jd = joint_distribution(SqueezedInput(1.0, 0.5), 1e-8);
  return jd;
}

JointDistribution transposed(const JointDistribution& jd) {
  JointDistribution t = jd;
  for (int a = 0; a <= jd.n_max(); ++a)
    for (int b = 0; b <= jd.n_max(); ++b) t.p(a, b) = jd(b, a);
  return t;
}

}  // namespace

TEST_CASE("joint distribution values") {
  const auto& jd = reference();
  CHECK(jd(1, 1) == doctest::Approx(0.0783).epsilon(0.002 / 0.0783));
  CHECK(jd(1, 3) == doctest::Approx(0.0216).epsilon(0.002 / 0.0216));
  CHECK(jd.captured_mass >= 1.0 - 1e-8);
  for (double p : jd.p.values()) CHECK(p >= 0.0);

  const auto vac = joint_distribution(SqueezedInput(0.0, 0.0), TruncationPolicy{3, 1e-8});
  CHECK(vac(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("heralded statistics") {
  const auto hs = heralded_stats(reference());
  CHECK(hs.p1 == doctest::Approx(0.151).epsilon(0.002 / 0.151));
  CHECK(hs.pn[1] == doctest::Approx(0.520).epsilon(0.002 / 0.520));
  CHECK(hs.pn[3] == doctest::Approx(0.144).epsilon(0.002 / 0.144));
  CHECK(hs.g2 == doctest::Approx(1.17).epsilon(0.02 / 1.17));

  double sum = 0.0;
  for (double q : hs.pn) sum += q;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // Three heralded photons are likelier than two.
  CHECK(hs.pn[3] > hs.pn[2]);
  CHECK(hs.pn[1] > std::exp(-1.0));

  const auto vac = joint_distribution(SqueezedInput(0.0, 0.0), TruncationPolicy{3, 1e-8});
  CHECK_THROWS_AS(heralded_stats(vac), DegeneracyError);
}

TEST_CASE("threshold probabilities") {
  const auto& jd = reference();
  const auto t = threshold_probs(jd);
  CHECK(t.q1 == doctest::Approx(0.509).epsilon(0.002 / 0.509));
  CHECK(t.q2 == doctest::Approx(0.435).epsilon(0.002 / 0.435));
  CHECK(t.q3 == doctest::Approx(0.129).epsilon(0.002 / 0.129));
  CHECK(t.baseline_miss == doctest::Approx(0.074).epsilon(0.002 / 0.074));
  CHECK(t.attacked_miss == doctest::Approx(0.139).epsilon(0.002 / 0.139));
  CHECK(t.attacked_miss - t.baseline_miss == doctest::Approx(t.q3 / 2).epsilon(1e-15));
  CHECK(0.0 <= t.q3);
  CHECK(t.q3 <= t.q2);
  CHECK(t.q2 <= t.q1);
  CHECK(t.q1 <= 1.0);

  double marginal = 0.0;
  for (int a = 1; a <= jd.n_max(); ++a)
    for (int b = 0; b <= jd.n_max(); ++b) marginal += jd(a, b);
  CHECK(std::abs(marginal - t.q1) < 1e-10);

  const auto vac = joint_distribution(SqueezedInput(0.0, 0.0), TruncationPolicy{3, 1e-8});
  const auto z = threshold_probs(vac);
  CHECK(z.q1 == 0.0);
  CHECK(z.q2 == 0.0);
  CHECK(z.q3 == 0.0);
}

TEST_CASE("statistics are invariant under mode swap") {
  const auto& jd = reference();
  const auto tr = transposed(jd);
  const auto a = heralded_stats(jd), b = heralded_stats(tr);
  CHECK(std::abs(a.p1 - b.p1) < 1e-12);
  CHECK(std::abs(a.g2 - b.g2) < 1e-10);
  const auto ta = threshold_probs(jd), tb = threshold_probs(tr);
  CHECK(std::abs(ta.q1 - tb.q1) < 1e-12);
  CHECK(std::abs(ta.q2 - tb.q2) < 1e-12);
  CHECK(std::abs(ta.q3 - tb.q3) < 1e-12);
}

TEST_CASE("attacked miss mass") {
  const auto& jd = reference();
  const auto t = threshold_probs(jd);
  CHECK(attacked_miss_mass(jd, 0.0) == doctest::Approx(t.baseline_miss).epsilon(1e-12));
  CHECK(attacked_miss_mass(jd, 1.0) == doctest::Approx(t.q1).epsilon(1e-12));
  double prev = 0.0;
  for (double rho = 0.0; rho <= 1.0; rho += 0.1) {
    const double m = attacked_miss_mass(jd, rho);
    CHECK(m >= prev);
    prev = m;
  }
  // Counting only single-photon pulses reproduces the Q3 / 2 shift.
  CHECK(attacked_miss_mass(jd, 0.5) > t.attacked_miss);
  CHECK_THROWS_AS(attacked_miss_mass(jd, 1.5), ValidationError);
}

TEST_CASE("sweep rows") {
  const auto rows = sweep_r(0.5, {0.0, 0.5, 1.0}, 1e-8, 1);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.ok);
  const auto hs = heralded_stats(reference());
  CHECK(rows[2].p1 == doctest::Approx(hs.p1).epsilon(1e-7));
  CHECK(rows[2].p11 == doctest::Approx(reference()(1, 1)).epsilon(1e-10));
  CHECK(rows[2].p_one == doctest::Approx(hs.pn[1]).epsilon(1e-7));

  const auto single = sweep_r(0.5, {0.8});
  CHECK(single.size() == 1);
  CHECK_THROWS_AS(sweep_r(0.5, {-0.1}), ValidationError);

  // P(1) climbs steadily with r.
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.05 * i);
  const auto curve = sweep_r(0.5, grid);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    REQUIRE(curve[i].ok);
    CHECK(curve[i].p_one >= curve[i - 1].p_one);
  }
}

TEST_CASE("sweep maxima") {
  const auto m = locate_maxima(0.5, 0.0, 2.0);
  CHECK(m.p11.value == doctest::Approx(0.0799).epsilon(0.002 / 0.0799));
  CHECK(std::abs(m.p11.r - 0.85) <= 0.01);
  CHECK(m.p1.value == doctest::Approx(0.165).epsilon(0.002 / 0.165));
  CHECK(std::abs(m.p1.r - 0.675) <= 0.01);
}

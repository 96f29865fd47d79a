#include <doctest.h>

#include <cmath>

#include "heraldq/bb84.hpp"
#include "heraldq/error.hpp"

using namespace heraldq;

namespace {

const JointDistribution& reference() {
  static const JointDistribution jd = joint_distribution(SqueezedInput(1.0, 0.5), 1e-8);
  return jd;
}

const AttackModel kEve{AttackKind::balanced_beam_splitter, 0.5};

}  // namespace

TEST_CASE("sessions are reproducible") {
  const auto a = simulate_session(reference(), 200000, kEve, 42);
  const auto b = simulate_session(reference(), 200000, kEve, 42);
  CHECK(a.herald_count == b.herald_count);
  CHECK(a.bob_detect_count == b.bob_detect_count);
  CHECK(a.sifted_bits == b.sifted_bits);
  CHECK(a.z_score == b.z_score);
  const auto c = simulate_session(reference(), 200000, kEve, 43);
  CHECK(a.herald_count != c.herald_count);
  CHECK(a.rng == "mt19937_64");
}

TEST_CASE("session input validation") {
  CHECK_THROWS_AS(simulate_session(reference(), 0, AttackModel{}, 1), ValidationError);
  CHECK_THROWS_AS(simulate_session(reference(), 10, AttackModel{AttackKind::balanced_beam_splitter, 1.2}, 1),
                  ValidationError);
}

TEST_CASE("zero splitting ratio matches no attack") {
  const auto none = simulate_session(reference(), 100000, AttackModel{}, 5);
  const auto zero = simulate_session(reference(), 100000, AttackModel{AttackKind::balanced_beam_splitter, 0.0}, 5);
  CHECK(none.herald_count == zero.herald_count);
  CHECK(none.bob_detect_count == zero.bob_detect_count);
  CHECK(none.bob_miss_given_herald == zero.bob_miss_given_herald);
}

TEST_CASE("miss rate grows with splitting ratio") {
  double prev = -1.0;
  for (double rho = 0.0; rho <= 1.0001; rho += 0.125) {
    const auto s = simulate_session(reference(), 100000, AttackModel{AttackKind::balanced_beam_splitter, rho}, 9);
    CHECK(s.bob_miss_given_herald >= prev);
    prev = s.bob_miss_given_herald;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("sampled cells follow the joint distribution") {
  const auto& jd = reference();
  constexpr std::uint64_t n = 1000000;
  const auto h = sample_histogram(jd, n, 3);
  CHECK(h.n == n);
  int tested = 0;
  for (int a = 0; a <= jd.n_max(); ++a)
    for (int b = 0; b <= jd.n_max(); ++b) {
      const double p = jd(a, b);
      if (p <= 1e-4) continue;
      const double sigma = std::sqrt(p * (1 - p) / n);
      CHECK(std::abs(h.counts(a, b) / n - p) <= 4 * sigma);
      ++tested;
    }
  CHECK(tested > 10);
  CHECK(static_cast<double>(h.overflow) / n < 1e-6);
}

TEST_CASE("clean session matches closed form") {
  const auto& jd = reference();
  const auto s = simulate_session(jd, 1000000, AttackModel{}, 7);
  const double want = expected_miss_given_herald(jd, AttackModel{});
  const double sigma = std::sqrt(want * (1 - want) / static_cast<double>(s.herald_count));
  CHECK(std::abs(s.bob_miss_given_herald - want) <= 4 * sigma);
  CHECK(s.verdict == Verdict::clean);
  CHECK(s.baseline_miss_given_herald == doctest::Approx(want).epsilon(1e-14));
  CHECK(s.sifted_bits < s.bob_detect_count);
  CHECK(std::abs(static_cast<double>(s.sifted_bits) / s.bob_detect_count - 0.5) < 0.01);
}

TEST_CASE("attacked session is flagged") {
  const auto& jd = reference();
  const auto s = simulate_session(jd, 100000, kEve, 11);
  CHECK(s.verdict == Verdict::attack_suspected);
  CHECK(s.z_score > 5.0);
  const double want = expected_miss_given_herald(jd, kEve);
  const double sigma = std::sqrt(want * (1 - want) / static_cast<double>(s.herald_count));
  CHECK(std::abs(s.bob_miss_given_herald - want) <= 4 * sigma);
}

TEST_CASE("small sessions are inconclusive") {
  const auto s = simulate_session(reference(), 50, kEve, 1);
  CHECK(s.herald_count < 100);
  CHECK(s.verdict == Verdict::inconclusive);
  SessionReport r;
  r.herald_count = 99;
  CHECK(detect_attack(r, 0.1) == Verdict::inconclusive);
  CHECK_THROWS_AS(detect_attack(r, 1.5), ValidationError);
}

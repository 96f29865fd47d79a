#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heraldq/photon_stats.hpp"

namespace heraldq {

enum class AttackKind { none, balanced_beam_splitter };

/// Eve's tap on the quantum channel. Each of Bob's photons is diverted to
/// Eve independently with probability `splitting_ratio`.
struct AttackModel {
  AttackKind kind = AttackKind::none;
  double splitting_ratio = 0.5;

  double effective_ratio() const { return kind == AttackKind::none ? 0.0 : splitting_ratio; }
  void validate() const;
};

enum class Verdict { clean, attack_suspected, inconclusive };

std::string_view to_string(Verdict v);
std::string_view to_string(AttackKind k);

struct SessionReport {
  std::uint64_t n_pulses = 0;
  std::uint64_t herald_count = 0;
  std::uint64_t bob_detect_count = 0;   ///< heralded pulses where Bob fired
  std::uint64_t sifted_bits = 0;        ///< heralded, detected, bases agree
  double bob_miss_given_herald = 0.0;
  double bob_miss_joint = 0.0;          ///< misses with herald / n_pulses
  double baseline_miss_given_herald = 0.0;
  double z_score = 0.0;
  Verdict verdict = Verdict::inconclusive;
  AttackModel attack;
  std::uint64_t seed = 0;
  std::string rng = "mt19937_64";
};

inline constexpr double kDefaultZThreshold = 5.0;

/// Monte Carlo session: sample (n1, n2) per pulse, herald on n1 >= 1, thin
/// Bob's photons under attack, threshold-detect. Mass outside the table goes
/// to an overflow cell with n_max + 1 photons in each port. The verdict is
/// detect_attack against the attack-free closed form of `jd`.
/// Throws ValidationError for n_pulses == 0.
SessionReport simulate_session(const JointDistribution& jd, std::uint64_t n_pulses,
                               const AttackModel& attack, std::uint64_t seed,
                               double z_threshold = kDefaultZThreshold);

/// One-sided z-test of the miss-given-herald rate against `baseline`.
/// Fewer than 100 heralds gives Verdict::inconclusive.
Verdict detect_attack(const SessionReport& report, double baseline_miss_given_herald,
                      double z_threshold = kDefaultZThreshold);

/// z statistic used by detect_attack.
double miss_rate_z(const SessionReport& report, double baseline_miss_given_herald);

/// Closed-form miss-given-herald probability under binomial thinning.
double expected_miss_given_herald(const JointDistribution& jd, const AttackModel& attack);

/// Counts of sampled (n1, n2) cells; the last entry is the overflow cell.
struct SampleHistogram {
  FockTable counts;
  std::uint64_t overflow = 0;
  std::uint64_t n = 0;
};

SampleHistogram sample_histogram(const JointDistribution& jd, std::uint64_t n_pulses,
                                 std::uint64_t seed);

}  // namespace heraldq

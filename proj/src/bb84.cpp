#include "heraldq/bb84.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "heraldq/error.hpp"

namespace heraldq {
namespace {

constexpr std::uint64_t kChunk = 1u << 16;

enum Stream : std::uint32_t { kSampling = 0, kRouting = 1, kBasis = 2 };

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t chunk, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// 53-bit uniform in [0, 1), identical on every standard library.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

struct Cell {
  int n1, n2;
};

/// Inverse-CDF sampler over the nonzero cells of the table plus overflow.
class CellSampler {
 public:
  explicit CellSampler(const JointDistribution& jd) {
    double acc = 0.0;
    for (int n1 = 0; n1 <= jd.n_max(); ++n1)
      for (int n2 = 0; n2 <= jd.n_max(); ++n2) {
        const double p = jd(n1, n2);
        if (!(p > 0.0)) continue;
        acc += p;
        cdf_.push_back(acc);
        cells_.push_back({n1, n2});
      }
    const double overflow = std::max(0.0, 1.0 - acc);
    if (overflow > 0.0) {
      acc += overflow;
      cdf_.push_back(acc);
      cells_.push_back({jd.n_max() + 1, jd.n_max() + 1});
    }
    if (cells_.empty()) throw ValidationError("sampler: joint distribution is empty");
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  Cell draw(std::mt19937_64& g) const {
    const double u = unit(g);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return cells_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf_.begin(), static_cast<std::ptrdiff_t>(cells_.size()) - 1))];
  }

 private:
  std::vector<double> cdf_;
  std::vector<Cell> cells_;
};

}  // namespace

void AttackModel::validate() const {
  if (!(splitting_ratio >= 0.0 && splitting_ratio <= 1.0))
    throw ValidationError("attack: splitting_ratio must lie in [0, 1]");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::clean: return "clean";
    case Verdict::attack_suspected: return "attack_suspected";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(AttackKind k) {
  return k == AttackKind::none ? "none" : "balanced_beam_splitter";
}

double miss_rate_z(const SessionReport& report, double baseline) {
  const double n = static_cast<double>(report.herald_count);
  if (n == 0.0) return 0.0;
  const double sd = std::sqrt(baseline * (1.0 - baseline) / n);
  const double diff = report.bob_miss_given_herald - baseline;
  if (sd == 0.0) return diff > 0.0 ? INFINITY : 0.0;
  return diff / sd;
}

Verdict detect_attack(const SessionReport& report, double baseline, double z_threshold) {
  if (!(baseline >= 0.0 && baseline <= 1.0))
    throw ValidationError("detect_attack: baseline rate must lie in [0, 1]");
  if (report.herald_count < 100) return Verdict::inconclusive;
  return miss_rate_z(report, baseline) > z_threshold ? Verdict::attack_suspected : Verdict::clean;
}

double expected_miss_given_herald(const JointDistribution& jd, const AttackModel& attack) {
  attack.validate();
  const ThresholdProbs t = threshold_probs(jd);
  if (!(t.q1 > 0.0)) throw DegeneracyError("expected_miss_given_herald: no herald events");
  return attacked_miss_mass(jd, attack.effective_ratio()) / t.q1;
}

SessionReport simulate_session(const JointDistribution& jd, std::uint64_t n_pulses,
                               const AttackModel& attack, std::uint64_t seed,
                               double z_threshold) {
  if (n_pulses == 0) throw ValidationError("simulate_session: empty session (n_pulses = 0)");
  attack.validate();
  const CellSampler sampler(jd);
  const double ratio = attack.effective_ratio();

  SessionReport rep;
  rep.n_pulses = n_pulses;
  rep.attack = attack;
  rep.seed = seed;

  std::uint64_t misses = 0;
  const std::uint64_t chunks = (n_pulses + kChunk - 1) / kChunk;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    auto sampling = stream_engine(seed, c, kSampling);
    auto routing = stream_engine(seed, c, kRouting);
    auto basis = stream_engine(seed, c, kBasis);
    const std::uint64_t count = std::min(kChunk, n_pulses - c * kChunk);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Cell cell = sampler.draw(sampling);
      if (cell.n1 < 1) continue;
      ++rep.herald_count;
      int arriving = 0;
      for (int j = 0; j < cell.n2; ++j)
        if (!(unit(routing) < ratio)) ++arriving;
      if (arriving == 0) {
        ++misses;
        continue;
      }
      ++rep.bob_detect_count;
      const auto bits = basis();
      if ((bits & 1u) == ((bits >> 1) & 1u)) ++rep.sifted_bits;
    }
  }

  rep.bob_miss_joint = static_cast<double>(misses) / static_cast<double>(n_pulses);
  rep.bob_miss_given_herald =
      rep.herald_count ? static_cast<double>(misses) / static_cast<double>(rep.herald_count) : 0.0;

  const ThresholdProbs t = threshold_probs(jd);
  rep.baseline_miss_given_herald = t.q1 > 0.0 ? t.baseline_miss / t.q1 : 0.0;
  rep.z_score = miss_rate_z(rep, rep.baseline_miss_given_herald);
  rep.verdict = detect_attack(rep, rep.baseline_miss_given_herald, z_threshold);
  return rep;
}

SampleHistogram sample_histogram(const JointDistribution& jd, std::uint64_t n_pulses,
                                 std::uint64_t seed) {
  const CellSampler sampler(jd);
  SampleHistogram h{FockTable(jd.n_max()), 0, n_pulses};
  const std::uint64_t chunks = (n_pulses + kChunk - 1) / kChunk;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    auto sampling = stream_engine(seed, c, kSampling);
    const std::uint64_t count = std::min(kChunk, n_pulses - c * kChunk);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Cell cell = sampler.draw(sampling);
      if (cell.n1 > jd.n_max())
        ++h.overflow;
      else
        h.counts(cell.n1, cell.n2) += 1.0;
    }
  }
  return h;
}

}  // namespace heraldq

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heraldq/fock_core.hpp"

namespace heraldq {

/// P(n1, n2) = |amplitude|^2 on the truncated box.
struct JointDistribution {
  FockTable p;
  double captured_mass = 0.0;
  double tail_tolerance = 0.0;
  SqueezedInput input{0.0, 0.0};

  int n_max() const noexcept { return p.n_max(); }
  double operator()(int n1, int n2) const { return p(n1, n2); }
};

/// Statistics of port b given that port a saw exactly one photon.
struct HeraldedStats {
  double p1 = 0.0;          ///< sum_n P(1, n)
  std::vector<double> pn;   ///< P(1, n) / p1
  double g2 = 0.0;          ///< <n(n-1)> / <n>^2 over pn
};

/// Threshold-detector probabilities. Alice's detector fires when n1 >= 1,
/// Bob's when n2 >= 1.
struct ThresholdProbs {
  double q1 = 0.0;  ///< n1 >= 1
  double q2 = 0.0;  ///< n1 >= 1 and n2 >= 1
  double q3 = 0.0;  ///< n1 >= 1 and n2 == 1
  double baseline_miss = 0.0;  ///< q1 - q2
  double attacked_miss = 0.0;  ///< q1 - q2 + q3 / 2
};

/// Joint distribution with n_max chosen by `trunc`. Propagates TruncationError.
JointDistribution joint_distribution(const SqueezedInput& input,
                                     const TruncationPolicy& trunc);

/// Same, with the smallest n_max that holds 1 - tail_tolerance of the mass.
JointDistribution joint_distribution(const SqueezedInput& input,
                                     double tail_tolerance = 1e-8);

/// Throws DegeneracyError when nothing heralds (p1 == 0) or port b is empty
/// given a herald, so g2 is undefined.
HeraldedStats heralded_stats(const JointDistribution& jd);

ThresholdProbs threshold_probs(const JointDistribution& jd);

/// Exact probability that Bob's threshold detector stays dark, jointly with a
/// herald, when each of his photons is independently diverted with
/// probability `ratio`: sum_{n1>=1, n2} P(n1, n2) ratio^n2.
double attacked_miss_mass(const JointDistribution& jd, double ratio);

struct SweepRow {
  double r = 0.0;
  double p11 = 0.0;   ///< P(1, 1)
  double p1 = 0.0;    ///< sum_n P(1, n)
  double p_one = 0.0; ///< P(1) = P(1, 1) / p1
  double tail = 0.0;  ///< row mass beyond the reported columns
  int n_max = 0;
  bool ok = true;
  std::string error;
};

/// Heralded quantities on a grid of r. Each point is computed from the n1 = 1
/// row alone. A failing point is marked, not fatal. `threads` = 0 picks the
/// hardware concurrency.
std::vector<SweepRow> sweep_r(double alpha, const std::vector<double>& r_grid,
                              double tail_tolerance = 1e-8, unsigned threads = 0);

SweepRow sweep_point(double alpha, double r, double tail_tolerance = 1e-8);

struct Maximum {
  double r = 0.0;
  double value = 0.0;
};

struct SweepMaxima {
  Maximum p11;
  Maximum p1;
};

/// Locates the maxima of P(1,1) and p1 over [r_lo, r_hi]: coarse grid, then
/// golden-section refinement around the best grid point.
SweepMaxima locate_maxima(double alpha, double r_lo, double r_hi,
                          double tail_tolerance = 1e-8);

}  // namespace heraldq

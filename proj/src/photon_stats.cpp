#include "heraldq/photon_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "heraldq/error.hpp"

namespace heraldq {

JointDistribution joint_distribution(const SqueezedInput& input,
                                     const TruncationPolicy& trunc) {
  const AmplitudeMatrix amp = output_amplitudes(input, trunc);
  JointDistribution jd{FockTable(amp.n_max()), 0.0, trunc.tail_tolerance, input};
  for (int n1 = 0; n1 <= amp.n_max(); ++n1)
    for (int n2 = 0; n2 <= amp.n_max(); ++n2) {
      const double a = amp(n1, n2);
      jd.p(n1, n2) = a * a;
      jd.captured_mass += a * a;
    }
  return jd;
}

JointDistribution joint_distribution(const SqueezedInput& input, double tail_tolerance) {
  return joint_distribution(input, fit_truncation(input, tail_tolerance));
}

HeraldedStats heralded_stats(const JointDistribution& jd) {
  HeraldedStats hs;
  for (double p : jd.p.row(1)) hs.p1 += p;
  if (!(hs.p1 > 0.0))
    throw DegeneracyError("heralded_stats: no herald events (P1 = 0)");
  hs.pn.reserve(static_cast<std::size_t>(jd.p.dim()));
  double m1 = 0.0, m2 = 0.0;
  for (int n = 0; n <= jd.n_max(); ++n) {
    const double q = jd(1, n) / hs.p1;
    hs.pn.push_back(q);
    m1 += n * q;
    m2 += static_cast<double>(n) * (n - 1) * q;
  }
  if (!(m1 > 0.0))
    throw DegeneracyError("heralded_stats: port b is empty given a herald, g2 undefined");
  hs.g2 = m2 / (m1 * m1);
  return hs;
}

ThresholdProbs threshold_probs(const JointDistribution& jd) {
  ThresholdProbs t;
  for (int n1 = 1; n1 <= jd.n_max(); ++n1) {
    for (int n2 = 0; n2 <= jd.n_max(); ++n2) {
      const double p = jd(n1, n2);
      t.q1 += p;
      if (n2 >= 1) t.q2 += p;
      if (n2 == 1) t.q3 += p;
    }
  }
  t.baseline_miss = t.q1 - t.q2;
  t.attacked_miss = t.baseline_miss + 0.5 * t.q3;
  return t;
}

double attacked_miss_mass(const JointDistribution& jd, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0))
    throw ValidationError("attacked_miss_mass: ratio must lie in [0, 1]");
  double miss = 0.0;
  for (int n1 = 1; n1 <= jd.n_max(); ++n1) {
    double w = 1.0;
    for (int n2 = 0; n2 <= jd.n_max(); ++n2) {
      miss += jd(n1, n2) * w;
      w *= ratio;
    }
  }
  return miss;
}

SweepRow sweep_point(double alpha, double r, double tail_tolerance) {
  SweepRow row;
  row.r = r;
  try {
    const SqueezedInput input(r, alpha);
    const TruncationPolicy trunc = fit_truncation(input, tail_tolerance);
    const AmplitudeRow amp = output_row(input, 1, trunc.n_max);
    row.n_max = trunc.n_max;
    row.tail = amp.tail_mass;
    row.p1 = amp.tail_mass;
    for (double a : amp.entries) row.p1 += a * a;
    row.p11 = amp.entries.size() > 1 ? amp.entries[1] * amp.entries[1] : 0.0;
    row.p_one = row.p1 > 0.0 ? row.p11 / row.p1 : 0.0;
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> sweep_r(double alpha, const std::vector<double>& r_grid,
                              double tail_tolerance, unsigned threads) {
  for (double r : r_grid)
    if (!(r >= 0.0)) throw ValidationError("sweep_r: grid values must be >= 0");
  std::vector<SweepRow> rows(r_grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, r_grid.size())));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < r_grid.size(); i = next++)
      rows[i] = sweep_point(alpha, r_grid[i], tail_tolerance);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  return rows;
}

namespace {

template <class F>
Maximum golden_max(F f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace

SweepMaxima locate_maxima(double alpha, double r_lo, double r_hi, double tail_tolerance) {
  if (!(r_lo >= 0.0 && r_hi > r_lo))
    throw ValidationError("locate_maxima: need 0 <= r_lo < r_hi");
  const int steps = 40;
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(r_lo + (r_hi - r_lo) * i / steps);
  const auto rows = sweep_r(alpha, grid, tail_tolerance);

  auto eval = [&](double r, double SweepRow::*field) {
    const SweepRow row = sweep_point(alpha, r, tail_tolerance);
    if (!row.ok) throw TruncationError("locate_maxima: " + row.error);
    return row.*field;
  };
  auto refine = [&](double SweepRow::*field) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].ok) throw TruncationError("locate_maxima: " + rows[i].error);
      if (rows[i].*field > rows[best].*field) best = i;
    }
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    return golden_max([&](double r) { return eval(r, field); }, lo, hi, 1e-5);
  };
  return {refine(&SweepRow::p11), refine(&SweepRow::p1)};
}

}  // namespace heraldq

#include "heraldq/crystal_bands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "heraldq/constants.hpp"
#include "heraldq/error.hpp"

namespace heraldq {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootTolerance = 1e-9;  // |F| at an accepted root, reduced units
constexpr double kTangentTolerance = 1e-10;

// Phases per unit of reduced frequency and the impedance factor.
struct Reduced {
  double tau_a, tau_b;  // phi = tau * w
  double g;             // (n_a^2 + n_b^2) / (2 n_a n_b)
  double half_ratio;    // (n_a/n_b + n_b/n_a) / 2
};

Reduced reduce(const CrystalSpec& spec) {
  const double na = std::sqrt(spec.eps_rel_a), nb = std::sqrt(spec.eps_rel_b);
  const double period = spec.period();
  return {kTwoPi * na * spec.l_a / period, kTwoPi * nb * spec.l_b / period,
          (na * na + nb * nb) / (2.0 * na * nb), 0.5 * (na / nb + nb / na)};
}

double residual(const Reduced& p, double w, double q, DispersionForm form) {
  const double fa = p.tau_a * w, fb = p.tau_b * w;
  if (form == DispersionForm::as_printed)
    return std::cos(q) - std::cos(fa) * std::cos(fb) + p.g * std::sin(fa) * std::sin(fb);
  return std::cos(q) - (std::cos(fa) * std::cos(fb) - p.half_ratio * std::sin(fa) * std::sin(fb));
}

double d_residual_dw(const Reduced& p, double w) {
  const double fa = p.tau_a * w, fb = p.tau_b * w;
  const double sa = std::sin(fa), ca = std::cos(fa), sb = std::sin(fb), cb = std::cos(fb);
  return p.tau_a * sa * cb + p.tau_b * ca * sb + p.g * (p.tau_a * ca * sb + p.tau_b * sa * cb);
}

double omega_scale(const CrystalSpec& spec) { return kTwoPi * kCodata2018.c / spec.period(); }

template <class F>
double bisect_root(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

// Reduced roots in (0, w_max], tangential ones counted twice.
std::vector<double> scan_roots(const Reduced& p, double q, double w_max, double density,
                               DispersionForm form) {
  std::vector<double> roots;
  const auto steps = static_cast<long>(std::ceil(w_max * density));
  const double h = w_max / static_cast<double>(steps);
  auto f = [&](double w) { return residual(p, w, q, form); };
  double prev = f(0.5 * h);
  double w0 = h, f0 = f(w0), d0 = d_residual_dw(p, w0);
  for (long i = 2; i <= steps; ++i) {
    const double w1 = h * static_cast<double>(i);
    const double f1 = f(w1), d1 = d_residual_dw(p, w1);
    if (f0 == 0.0) {
      // Landed on a root: tangential if F keeps its sign across it.
      const bool touch = (prev < 0.0) == (f1 < 0.0);
      roots.push_back(w0);
      if (touch) roots.push_back(w0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      roots.push_back(bisect_root(f, w0, w1));
    } else if (f1 != 0.0 && (d0 < 0.0) != (d1 < 0.0)) {
      // An extremum of F with no sign change: two bands may touch here.
      const double we = bisect_root([&](double w) { return d_residual_dw(p, w); }, w0, w1);
      const double fe = f(we);
      if (std::abs(fe) < kTangentTolerance) {
        roots.push_back(we);
        roots.push_back(we);
      } else if ((fe < 0.0) != (f0 < 0.0)) {
        // A gap narrower than the grid: two crossings in one cell.
        roots.push_back(bisect_root(f, w0, we));
        roots.push_back(bisect_root(f, we, w1));
      }
    }
    prev = f0;
    w0 = w1;
    f0 = f1;
    d0 = d1;
  }
  return roots;
}

std::vector<double> reduced_bands(const CrystalSpec& spec, double q, int n_bands,
                                  double density, DispersionForm form) {
  const Reduced p = reduce(spec);
  const double w_unit = 1.0;
  std::vector<double> roots;
  double w_max = 0.0;
  const double w_cap = 4.0 * n_bands + 4.0;
  const bool at_center = std::abs(std::remainder(q, kTwoPi)) == 0.0;

  while (true) {
    w_max += w_unit;
    roots = scan_roots(p, q, w_max, density, form);
    if (at_center) roots.insert(roots.begin(), 0.0);
    if (static_cast<int>(roots.size()) >= n_bands + 1 || w_max >= w_cap) break;
  }
  if (static_cast<int>(roots.size()) < n_bands) {
    std::ostringstream msg;
    msg << "band_frequencies: found " << roots.size() << " of " << n_bands
        << " bands below reduced frequency " << w_max;
    throw DegeneracyError(msg.str());
  }

  // Confirm the bracket count on a grid twice as fine.
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto finer = scan_roots(p, q, w_max, 2.0 * density, form);
    if (at_center) finer.insert(finer.begin(), 0.0);
    if (finer.size() == roots.size()) {
      roots.resize(static_cast<std::size_t>(n_bands));
      for (double w : roots) {
        if (std::abs(residual(p, w, q, form)) > kRootTolerance)
          throw DegeneracyError("band_frequencies: root failed residual check");
      }
      return roots;
    }
    density *= 2.0;
    roots = std::move(finer);
  }
  std::ostringstream msg;
  msg << "band_frequencies: insufficient bracket, root count still changing at "
      << density << " points per unit";
  throw DegeneracyError(msg.str());
}

// Band limits at both zone edges.
struct BandRange {
  double lo, hi;
};

BandRange band_range(const CrystalSpec& spec, int band_index) {
  const auto a = reduced_bands(spec, 0.0, band_index, 4000.0, DispersionForm::as_printed);
  const auto b =
      reduced_bands(spec, std::numbers::pi, band_index, 4000.0, DispersionForm::as_printed);
  const double x = a[band_index - 1], y = b[band_index - 1];
  return {std::min(x, y), std::max(x, y)};
}

// Within one band the root moves monotonically between the range limits.
double root_in_band(const Reduced& p, const BandRange& br, double q) {
  auto f = [&](double w) { return residual(p, w, q, DispersionForm::as_printed); };
  const double flo = f(br.lo), fhi = f(br.hi);
  if (std::abs(flo) < kRootTolerance * 1e-3 || flo == 0.0) return br.lo;
  if (std::abs(fhi) < kRootTolerance * 1e-3 || fhi == 0.0) return br.hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    // Edge rounding: the edge root itself is the closest point.
    return std::abs(flo) < std::abs(fhi) ? br.lo : br.hi;
  }
  return bisect_root(f, br.lo, br.hi);
}

double n_eff(const CrystalSpec& spec) {
  return std::sqrt((spec.l_a * spec.eps_rel_a + spec.l_b * spec.eps_rel_b) / spec.period());
}

// |dw/dq| -> v_g in m/s.
double vg_reduced(const CrystalSpec& spec, const Reduced& p, double w, double q) {
  if (w == 0.0) return kCodata2018.c / n_eff(spec);
  const double fw = d_residual_dw(p, w);
  // sin(pi) rounds to 1.2e-16; the zone edge is a stationary point exactly.
  const double fq = std::abs(q - std::numbers::pi) <= 1e-12 * std::numbers::pi ? 0.0 : -std::sin(q);
  if (std::abs(fw) < 1e-10) {
    std::ostringstream msg;
    msg << "group_velocity: dF/domega vanishes at reduced (w, q) = (" << w << ", " << q
        << "), bands touch here";
    throw DegeneracyError(msg.str());
  }
  return kTwoPi * kCodata2018.c * std::abs(fq / fw);
}

void check_band_index(int band_index) {
  if (band_index < 1) throw ValidationError("band index must be >= 1");
}

void check_k(const CrystalSpec& spec, double k) {
  const double q = k * spec.period();
  if (!(q >= 0.0 && q <= std::numbers::pi * (1.0 + 1e-12)))
    throw ValidationError("wavenumber must lie in [0, pi/L]");
}

}  // namespace

CrystalSpec CrystalSpec::air_linbo3() {
  CrystalSpec s;
  s.l_a = 5.5e-7;
  s.l_b = 5.5e-7;
  s.eps_rel_a = 1.0;
  s.eps_rel_b = 2.22 * 2.22;
  s.chi2_tilde = 25.2e-12;
  s.l_nl = 5.0e-5;
  return s;
}

void CrystalSpec::validate() const {
  if (!(l_a > 0.0) || !(l_b >= 0.0))
    throw ValidationError("crystal: l_a must be > 0 and l_b >= 0");
  if (!(eps_rel_a >= 1.0) || !(eps_rel_b >= 1.0))
    throw ValidationError("crystal: relative permittivities must be >= 1");
  if (!(chi2_tilde >= 0.0)) throw ValidationError("crystal: chi2_tilde must be >= 0");
  if (!(l_nl >= 0.0)) throw ValidationError("crystal: l_nl must be >= 0");
}

double dispersion_residual(const CrystalSpec& spec, double omega, double k,
                           DispersionForm form) {
  spec.validate();
  const double c = kCodata2018.c;
  if (omega == 0.0) return std::cos(spec.period() * k) - 1.0;
  const double ka = omega / c * std::sqrt(spec.eps_rel_a);
  const double kb = omega / c * std::sqrt(spec.eps_rel_b);
  const double ca = std::cos(spec.l_a * ka), cb = std::cos(spec.l_b * kb);
  const double sa = std::sin(spec.l_a * ka), sb = std::sin(spec.l_b * kb);
  if (form == DispersionForm::as_printed)
    return std::cos(spec.period() * k) - ca * cb + (ka * ka + kb * kb) / (2.0 * ka * kb) * sa * sb;
  return std::cos(spec.period() * k) - (ca * cb - 0.5 * (ka / kb + kb / ka) * sa * sb);
}

double reduced_residual(const CrystalSpec& spec, double w, double q, DispersionForm form) {
  spec.validate();
  return residual(reduce(spec), w, q, form);
}

std::vector<double> band_frequencies(const CrystalSpec& spec, double k, int n_bands,
                                     double scan_per_unit, DispersionForm form) {
  spec.validate();
  check_k(spec, k);
  if (n_bands < 1) throw ValidationError("band_frequencies: n_bands must be >= 1");
  if (!(scan_per_unit >= 10.0))
    throw ValidationError("band_frequencies: scan resolution too coarse");
  auto w = reduced_bands(spec, k * spec.period(), n_bands, scan_per_unit, form);
  for (double& x : w) x *= omega_scale(spec);
  return w;
}

double group_velocity(const CrystalSpec& spec, int band_index, double k) {
  spec.validate();
  check_band_index(band_index);
  check_k(spec, k);
  const double q = k * spec.period();
  const auto w = reduced_bands(spec, q, band_index, 4000.0, DispersionForm::as_printed);
  return vg_reduced(spec, reduce(spec), w[band_index - 1], q);
}

BandSolution sample_band(const CrystalSpec& spec, int band_index, int points) {
  spec.validate();
  check_band_index(band_index);
  if (points < 2) throw ValidationError("sample_band: need at least 2 points");
  const Reduced p = reduce(spec);
  const BandRange br = band_range(spec, band_index);
  const double scale = omega_scale(spec);

  BandSolution sol;
  sol.band_index = band_index;
  for (int i = 0; i < points; ++i) {
    const double q = std::numbers::pi * i / (points - 1);
    const double w = (band_index == 1 && i == 0) ? 0.0 : root_in_band(p, br, q);
    double vg = 0.0;
    if (i > 0 && i < points - 1) vg = vg_reduced(spec, p, w, q);
    else if (band_index == 1 && i == 0) vg = vg_reduced(spec, p, 0.0, 0.0);
    sol.samples.push_back({q / spec.period(), w * scale, vg});
  }
  sol.omega_at_zero = sol.samples.front().omega;
  sol.omega_at_boundary = sol.samples.back().omega;
  return sol;
}

std::optional<int> band_of(const CrystalSpec& spec, double omega, int max_bands) {
  spec.validate();
  const double w = omega / omega_scale(spec);
  const auto a = reduced_bands(spec, 0.0, max_bands, 4000.0, DispersionForm::as_printed);
  const auto b =
      reduced_bands(spec, std::numbers::pi, max_bands, 4000.0, DispersionForm::as_printed);
  for (int i = 0; i < max_bands; ++i) {
    if (w >= std::min(a[i], b[i]) && w <= std::max(a[i], b[i])) return i + 1;
  }
  return std::nullopt;
}

TuningReport tune_to_group_velocity(const CrystalSpec& spec, int band_index, double target_vg) {
  spec.validate();
  check_band_index(band_index);
  if (!(target_vg >= 0.0)) throw ValidationError("tune: target group velocity must be >= 0");
  const Reduced p = reduce(spec);
  const BandRange br = band_range(spec, band_index);
  const double scale = omega_scale(spec);
  const double c = kCodata2018.c;

  auto w_at = [&](double q) {
    return (band_index == 1 && q == 0.0) ? 0.0 : root_in_band(p, br, q);
  };
  auto vg_at = [&](double q) {
    if (q == 0.0 && band_index != 1) return 0.0;
    return vg_reduced(spec, p, w_at(q), q);
  };

  TuningReport rep;
  rep.band_index = band_index;
  rep.target_vg_over_c = target_vg / c;
  rep.omega_edge = w_at(0.0) * scale;
  rep.nu_s = rep.omega_edge / kTwoPi;

  constexpr int kGrid = 1024;
  std::vector<double> grid_vg(kGrid + 1);
  int first = -1;
  double vmax = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double q = std::numbers::pi * i / kGrid;
    grid_vg[i] = (i == kGrid) ? 0.0 : vg_at(q);
    vmax = std::max(vmax, grid_vg[i]);
    if (first < 0 && grid_vg[i] >= target_vg) first = i;
  }
  rep.max_vg_over_c = vmax / c;
  if (first < 0) {
    std::ostringstream msg;
    msg << "tune: band " << band_index << " reaches v_g/c in [0, " << vmax / c
        << "], target " << target_vg / c << " is out of range";
    throw ValidationError(msg.str());
  }

  double q_star = 0.0;
  if (first > 0) {
    const double lo = std::numbers::pi * (first - 1) / kGrid;
    const double hi = std::numbers::pi * first / kGrid;
    q_star = bisect_root([&](double q) { return vg_at(q) - target_vg; }, lo, hi);
  }
  rep.k_star = q_star / spec.period();
  rep.omega_star = w_at(q_star) * scale;
  rep.nu_star = rep.omega_star / kTwoPi;
  rep.delta_omega = std::abs(rep.omega_star - rep.omega_edge);
  rep.delta_nu = rep.delta_omega / kTwoPi;
  return rep;
}

std::optional<std::string> dispersion_conformance_note(const CrystalSpec& spec, int n_bands) {
  spec.validate();
  const auto printed = reduced_bands(spec, 0.0, n_bands, 4000.0, DispersionForm::as_printed);
  const auto standard =
      reduced_bands(spec, 0.0, n_bands, 4000.0, DispersionForm::transfer_matrix);
  double worst = 0.0;
  for (int i = 0; i < n_bands; ++i) worst = std::max(worst, std::abs(printed[i] - standard[i]));
  if (worst <= 1e-9) return std::nullopt;
  std::ostringstream msg;
  msg << "conformance: printed and transfer-matrix dispersion forms disagree on k=0 band "
         "edges by up to "
      << worst << " (reduced units); transfer-matrix form is authoritative";
  return msg.str();
}

}  // namespace heraldq

// heraldq command-line front end. Every command writes CSV/JSON data files
// and exits 0 on success, 2 on bad input, 3 on truncation failure, 4 when a
// quantity is numerically undefined.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "heraldq/acceptance.hpp"
#include "heraldq/config.hpp"
#include "heraldq/error.hpp"
#include "heraldq/report_io.hpp"

using namespace heraldq;
using nlohmann::json;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return 2;
    case ErrorKind::truncation: return 3;
    case ErrorKind::degeneracy: return 4;
  }
  return 1;
}

struct Options {
  std::string config_path;
  std::optional<double> r, alpha;
  std::optional<int> n_max;
  std::optional<double> tail;
  std::optional<std::string> out_dir;
  bool oracle = false;
  std::optional<double> r_min, r_max;
  std::optional<int> steps;
  std::optional<std::uint64_t> n_pulses, seed;
  std::optional<std::string> attack;
  std::optional<double> ratio, z_threshold;
  std::optional<int> band;
  std::optional<double> target_vg;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.r) cfg.r = *o.r;
  if (o.alpha) {
    cfg.alpha = *o.alpha;
    cfg.sweep.alpha = *o.alpha;
  }
  if (o.n_max) cfg.n_max = *o.n_max;
  if (o.tail) cfg.tail_tolerance = *o.tail;
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  if (o.r_min) cfg.sweep.r_min = *o.r_min;
  if (o.r_max) cfg.sweep.r_max = *o.r_max;
  if (o.steps) cfg.sweep.steps = *o.steps;
  if (o.n_pulses) cfg.bb84.n_pulses = *o.n_pulses;
  if (o.seed) cfg.seed = *o.seed;
  if (o.attack) {
    if (*o.attack == "none")
      cfg.bb84.attack.kind = AttackKind::none;
    else if (*o.attack == "balanced_beam_splitter" || *o.attack == "bs")
      cfg.bb84.attack.kind = AttackKind::balanced_beam_splitter;
    else
      throw ValidationError("--attack must be none or balanced_beam_splitter");
  }
  if (o.ratio) cfg.bb84.attack.splitting_ratio = *o.ratio;
  if (o.z_threshold) cfg.bb84.z_threshold = *o.z_threshold;
  if (o.band) cfg.bands.tune_band = *o.band;
  if (o.target_vg) cfg.bands.target_vg_over_c = *o.target_vg;
  cfg.validate();
  return cfg;
}

JointDistribution distribution_for(const RunConfig& cfg) {
  const SqueezedInput in(cfg.r, cfg.alpha);
  if (cfg.n_max > 0) return joint_distribution(in, TruncationPolicy{cfg.n_max, cfg.tail_tolerance});
  return joint_distribution(in, cfg.tail_tolerance);
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
  const auto path = cfg.output_dir / name;
  write_text(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

int cmd_dist(const RunConfig& cfg, bool with_oracle) {
  const JointDistribution jd = distribution_for(cfg);
  json j;
  j["r"] = cfg.r;
  j["alpha"] = cfg.alpha;
  j["n_max"] = jd.n_max();
  j["captured_mass"] = jd.captured_mass;
  j["tail_tolerance"] = jd.tail_tolerance;
  try {
    j["heralded"] = to_json(heralded_stats(jd));
  } catch (const DegeneracyError& e) {
    j["heralded"] = {{"error", e.what()}};
  }
  j["threshold"] = to_json(threshold_probs(jd));
  if (with_oracle) {
    const AmplitudeMatrix orc = oracle_state(SqueezedInput(cfg.r, cfg.alpha), jd.n_max());
    double worst = 0.0;
    for (int a = 0; a <= jd.n_max(); ++a)
      for (int b = 0; b <= jd.n_max(); ++b)
        worst = std::max(worst, std::abs(jd(a, b) - orc(a, b) * orc(a, b)));
    j["oracle_max_abs_dp"] = worst;
    std::cout << "max |dP| vs oracle: " << format_number(worst) << "\n";
  }
  emit(cfg, "joint_distribution.csv", joint_csv(jd));
  emit(cfg, "heralded_stats.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto& s = cfg.sweep;
  std::vector<double> grid;
  if (s.r_min == s.r_max || s.steps == 1) {
    grid.push_back(s.r_min);
  } else {
    for (int i = 0; i < s.steps; ++i)
      grid.push_back(s.r_min + (s.r_max - s.r_min) * i / (s.steps - 1));
  }
  const auto rows = sweep_r(s.alpha, grid, cfg.tail_tolerance);
  emit(cfg, "sweep.csv", sweep_csv(rows));
  json j;
  j["alpha"] = s.alpha;
  j["points"] = rows.size();
  j["failed_points"] = std::count_if(rows.begin(), rows.end(), [](auto& r) { return !r.ok; });
  if (s.r_max > s.r_min) j["maxima"] = to_json(locate_maxima(s.alpha, s.r_min, s.r_max, cfg.tail_tolerance));
  emit(cfg, "sweep_maxima.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

json tuning_json(const RunConfig& cfg) {
  const double c = kCodata2018.c;
  const TuningReport t =
      tune_to_group_velocity(cfg.crystal, cfg.bands.tune_band, cfg.bands.target_vg_over_c * c);
  json j = to_json(t);
  // Fixed-omega_s reading: signal held at the band edge, only v_g varies.
  j["fixed_edge"] = {{"omega_s", t.omega_edge}, {"nu_s", t.nu_s}};
  j["tuned"] = {{"omega_s", t.omega_star}, {"nu_s", t.nu_star}};
  j["delta_nu_over_nu_s"] = t.delta_nu / t.nu_s;
  const double v_g = cfg.bands.target_vg_over_c * c;
  if (v_g > 0.0) {
    const double a = flux_to_amplitude(cfg.pump);
    j["pump_amplitude"] = a;
    j["amplitude_for_unit_zeta"] =
        amplitude_for_target_squeeze(1.0, t.omega_edge, cfg.crystal.chi2_tilde, v_g, cfg.crystal.l_nl);
    j["zeta"] = squeeze_parameter(t.omega_edge, a, cfg.crystal.chi2_tilde, v_g, cfg.crystal.l_nl);
  }
  return j;
}

int cmd_bands(const RunConfig& cfg) {
  std::vector<BandSolution> bands;
  for (int b = 1; b <= cfg.bands.count; ++b) bands.push_back(sample_band(cfg.crystal, b, cfg.bands.points));
  emit(cfg, "bands.csv", bands_csv(cfg.crystal, bands));

  const double scale = cfg.crystal.period() / (2.0 * std::numbers::pi * kCodata2018.c);
  json j;
  json edges = json::array();
  for (const auto& b : bands)
    edges.push_back({{"band_index", b.band_index},
                     {"omega_tilde_k0", b.omega_at_zero * scale},
                     {"omega_tilde_kpi", b.omega_at_boundary * scale}});
  j["edges"] = edges;
  if (auto note = dispersion_conformance_note(cfg.crystal)) j["conformance_note"] = *note;
  try {
    j["tuning"] = tuning_json(cfg);
  } catch (const Error& e) {
    j["tuning"] = {{"error", e.what()}};
  }
  emit(cfg, "bands.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_tune(const RunConfig& cfg) {
  const json j = tuning_json(cfg);
  emit(cfg, "tuning.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_bb84(const RunConfig& cfg) {
  const JointDistribution jd = distribution_for(cfg);
  const SessionReport rep =
      simulate_session(jd, cfg.bb84.n_pulses, cfg.bb84.attack, cfg.seed, cfg.bb84.z_threshold);
  json j = to_json(rep);
  j["expected_miss_given_herald"] = expected_miss_given_herald(jd, cfg.bb84.attack);
  emit(cfg, "session.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_selftest() {
  const auto results = run_acceptance();
  std::cout << format_results(results);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heraldq: heralded photon source model"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--tail", o.tail, "allowed probability mass outside the Fock box");
  };
  auto input = [&](CLI::App* sub) {
    sub->add_option("--r", o.r, "squeeze magnitude r >= 0");
    sub->add_option("--alpha", o.alpha, "real coherent amplitude");
    sub->add_option("--n-max", o.n_max, "Fock cutoff per mode (default: fitted to --tail)");
  };

  auto* dist = app.add_subcommand("dist", "joint distribution CSV and heralded statistics JSON");
  common(dist);
  input(dist);
  dist->add_flag("--oracle", o.oracle, "compare with the truncated-exponential oracle");

  auto* sweep = app.add_subcommand("sweep", "P(1,1), P1, P(1) over a grid of r");
  common(sweep);
  sweep->add_option("--alpha", o.alpha, "real coherent amplitude");
  sweep->add_option("--r-min", o.r_min);
  sweep->add_option("--r-max", o.r_max);
  sweep->add_option("--steps", o.steps);

  auto* bands = app.add_subcommand("bands", "band diagram CSV, band edges and tuning JSON");
  common(bands);
  bands->add_option("--band", o.band, "band used for tuning");
  bands->add_option("--target-vg", o.target_vg, "target v_g/c");

  auto* tune = app.add_subcommand("tune", "tune a band to a target group velocity");
  common(tune);
  tune->add_option("--band", o.band, "band index, 1-based");
  tune->add_option("--target-vg", o.target_vg, "target v_g/c");

  auto* bb84 = app.add_subcommand("bb84", "Monte Carlo BB84 session report");
  common(bb84);
  input(bb84);
  bb84->add_option("--n-pulses", o.n_pulses);
  bb84->add_option("--attack", o.attack, "none | balanced_beam_splitter");
  bb84->add_option("--ratio", o.ratio, "Eve's splitting ratio");
  bb84->add_option("--seed", o.seed);
  bb84->add_option("--z-threshold", o.z_threshold);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*selftest) return cmd_selftest();
    const RunConfig cfg = resolve(o);
    if (*dist) return cmd_dist(cfg, o.oracle);
    if (*sweep) return cmd_sweep(cfg);
    if (*bands) return cmd_bands(cfg);
    if (*tune) return cmd_tune(cfg);
    if (*bb84) return cmd_bb84(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

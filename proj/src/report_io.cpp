#include "heraldq/report_io.hpp"

#include <charconv>
#include <fstream>
#include <numbers>

#include "heraldq/constants.hpp"
#include "heraldq/error.hpp"

namespace heraldq {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string joint_csv(const JointDistribution& jd) {
  std::string out = "n1,n2,p\n";
  for (int n1 = 0; n1 <= jd.n_max(); ++n1)
    for (int n2 = 0; n2 <= jd.n_max(); ++n2)
      out += std::to_string(n1) + "," + std::to_string(n2) + "," + format_number(jd(n1, n2)) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "r,p11,p1,p_one,tail,n_max,ok\n";
  for (const auto& r : rows) {
    out += format_number(r.r) + "," + format_number(r.p11) + "," + format_number(r.p1) + "," +
           format_number(r.p_one) + "," + format_number(r.tail) + "," + std::to_string(r.n_max) +
           "," + (r.ok ? "1" : "0") + "\n";
  }
  return out;
}

std::string bands_csv(const CrystalSpec& spec, const std::vector<BandSolution>& bands) {
  const double L = spec.period();
  const double w_scale = L / (2.0 * std::numbers::pi * kCodata2018.c);
  std::string out = "band_index,k_tilde,omega_tilde,vg_over_c\n";
  for (const auto& b : bands)
    for (const auto& s : b.samples)
      out += std::to_string(b.band_index) + "," + format_number(s.k * L) + "," +
             format_number(s.omega * w_scale) + "," + format_number(s.v_g / kCodata2018.c) + "\n";
  return out;
}

nlohmann::json to_json(const HeraldedStats& hs) {
  return {{"p1", hs.p1}, {"pn", hs.pn}, {"g2", hs.g2}};
}

nlohmann::json to_json(const ThresholdProbs& tp) {
  return {{"q1", tp.q1},
          {"q2", tp.q2},
          {"q3", tp.q3},
          {"baseline_miss", tp.baseline_miss},
          {"attacked_miss", tp.attacked_miss}};
}

nlohmann::json to_json(const SweepMaxima& m) {
  return {{"p11_max", {{"r", m.p11.r}, {"value", m.p11.value}}},
          {"p1_max", {{"r", m.p1.r}, {"value", m.p1.value}}}};
}

nlohmann::json to_json(const TuningReport& t) {
  return {{"band_index", t.band_index},
          {"target_vg_over_c", t.target_vg_over_c},
          {"k_star", t.k_star},
          {"omega_star", t.omega_star},
          {"omega_edge", t.omega_edge},
          {"delta_omega", t.delta_omega},
          {"delta_nu", t.delta_nu},
          {"nu_s", t.nu_s},
          {"nu_star", t.nu_star},
          {"max_vg_over_c", t.max_vg_over_c}};
}

nlohmann::json to_json(const SessionReport& s) {
  return {{"n_pulses", s.n_pulses},
          {"herald_count", s.herald_count},
          {"bob_detect_count", s.bob_detect_count},
          {"sifted_bits", s.sifted_bits},
          {"bob_miss_given_herald", s.bob_miss_given_herald},
          {"bob_miss_joint", s.bob_miss_joint},
          {"baseline_miss_given_herald", s.baseline_miss_given_herald},
          {"z_score", s.z_score},
          {"verdict", std::string(to_string(s.verdict))},
          {"attack", std::string(to_string(s.attack.kind))},
          {"splitting_ratio", s.attack.splitting_ratio},
          {"seed", s.seed},
          {"rng", s.rng}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

}  // namespace heraldq

#include "heraldq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "heraldq/error.hpp"

namespace heraldq {
namespace {

using nlohmann::json;

void only_keys(const json& obj, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError("config: '" + std::string(where) + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError("config: unknown key '" + std::string(where) + "." + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ValidationError("");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ValidationError("");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ValidationError("");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
          throw ValidationError("");
      }
      out = v.get<T>();
    } else {
      if (!v.is_string()) throw ValidationError("");
      out = v.get<std::string>();
    }
  } catch (const ValidationError&) {
    throw ValidationError("config: '" + std::string(where) + "." + key + "' has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  crystal.validate();
  pump.validate();
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("config: r must be >= 0");
  if (!std::isfinite(alpha)) throw ValidationError("config: alpha must be finite");
  if (n_max > 0) TruncationPolicy{n_max, tail_tolerance}.validate();
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
    throw ValidationError("config: tail_tolerance must lie in (0, 1)");
  if (!(sweep.r_min >= 0.0 && sweep.r_max >= sweep.r_min))
    throw ValidationError("config: sweep needs 0 <= r_min <= r_max");
  if (sweep.steps < 1) throw ValidationError("config: sweep.steps must be >= 1");
  if (bands.count < 1 || bands.points < 2 || bands.tune_band < 1)
    throw ValidationError("config: bands.count >= 1, bands.points >= 2, bands.tune_band >= 1");
  if (!(bands.target_vg_over_c >= 0.0))
    throw ValidationError("config: bands.target_vg_over_c must be >= 0");
  if (bb84.n_pulses == 0) throw ValidationError("config: bb84.n_pulses must be >= 1");
  bb84.attack.validate();
  if (!(bb84.z_threshold > 0.0)) throw ValidationError("config: bb84.z_threshold must be > 0");
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  only_keys(j, "root",
            {"crystal", "pump", "input", "truncation", "sweep", "bands", "bb84", "seed", "output_dir"});

  if (j.contains("crystal")) {
    const json& c = j.at("crystal");
    only_keys(c, "crystal", {"l_a", "l_b", "eps_rel_a", "eps_rel_b", "chi2_tilde", "l_nl"});
    read(c, "l_a", cfg.crystal.l_a, "crystal");
    read(c, "l_b", cfg.crystal.l_b, "crystal");
    read(c, "eps_rel_a", cfg.crystal.eps_rel_a, "crystal");
    read(c, "eps_rel_b", cfg.crystal.eps_rel_b, "crystal");
    read(c, "chi2_tilde", cfg.crystal.chi2_tilde, "crystal");
    read(c, "l_nl", cfg.crystal.l_nl, "crystal");
  }
  if (j.contains("pump")) {
    const json& p = j.at("pump");
    only_keys(p, "pump", {"radiant_flux", "beam_radius", "refractive_index", "amplitude"});
    read(p, "radiant_flux", cfg.pump.radiant_flux, "pump");
    read(p, "beam_radius", cfg.pump.beam_radius, "pump");
    read(p, "refractive_index", cfg.pump.refractive_index, "pump");
    if (p.contains("amplitude")) {
      double a = 0.0;
      read(p, "amplitude", a, "pump");
      cfg.pump.amplitude = a;
    }
  }
  if (j.contains("input")) {
    const json& in = j.at("input");
    only_keys(in, "input", {"r", "alpha"});
    read(in, "r", cfg.r, "input");
    read(in, "alpha", cfg.alpha, "input");
  }
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    only_keys(t, "truncation", {"n_max", "tail_tolerance"});
    read(t, "n_max", cfg.n_max, "truncation");
    read(t, "tail_tolerance", cfg.tail_tolerance, "truncation");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    only_keys(s, "sweep", {"alpha", "r_min", "r_max", "steps"});
    read(s, "alpha", cfg.sweep.alpha, "sweep");
    read(s, "r_min", cfg.sweep.r_min, "sweep");
    read(s, "r_max", cfg.sweep.r_max, "sweep");
    read(s, "steps", cfg.sweep.steps, "sweep");
  }
  if (j.contains("bands")) {
    const json& b = j.at("bands");
    only_keys(b, "bands", {"count", "points", "tune_band", "target_vg_over_c"});
    read(b, "count", cfg.bands.count, "bands");
    read(b, "points", cfg.bands.points, "bands");
    read(b, "tune_band", cfg.bands.tune_band, "bands");
    read(b, "target_vg_over_c", cfg.bands.target_vg_over_c, "bands");
  }
  if (j.contains("bb84")) {
    const json& b = j.at("bb84");
    only_keys(b, "bb84", {"n_pulses", "attack", "splitting_ratio", "z_threshold"});
    read(b, "n_pulses", cfg.bb84.n_pulses, "bb84");
    std::string kind = "none";
    read(b, "attack", kind, "bb84");
    if (kind == "none")
      cfg.bb84.attack.kind = AttackKind::none;
    else if (kind == "balanced_beam_splitter")
      cfg.bb84.attack.kind = AttackKind::balanced_beam_splitter;
    else
      throw ValidationError("config: bb84.attack must be 'none' or 'balanced_beam_splitter'");
    read(b, "splitting_ratio", cfg.bb84.attack.splitting_ratio, "bb84");
    read(b, "z_threshold", cfg.bb84.z_threshold, "bb84");
  }
  read(j, "seed", cfg.seed, "root");
  std::string out = cfg.output_dir.string();
  read(j, "output_dir", out, "root");
  cfg.output_dir = out;

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["crystal"] = {{"l_a", cfg.crystal.l_a},
                  {"l_b", cfg.crystal.l_b},
                  {"eps_rel_a", cfg.crystal.eps_rel_a},
                  {"eps_rel_b", cfg.crystal.eps_rel_b},
                  {"chi2_tilde", cfg.crystal.chi2_tilde},
                  {"l_nl", cfg.crystal.l_nl}};
  j["pump"] = {{"radiant_flux", cfg.pump.radiant_flux},
               {"beam_radius", cfg.pump.beam_radius},
               {"refractive_index", cfg.pump.refractive_index}};
  if (cfg.pump.amplitude) j["pump"]["amplitude"] = *cfg.pump.amplitude;
  j["input"] = {{"r", cfg.r}, {"alpha", cfg.alpha}};
  j["truncation"] = {{"n_max", cfg.n_max}, {"tail_tolerance", cfg.tail_tolerance}};
  j["sweep"] = {{"alpha", cfg.sweep.alpha},
                {"r_min", cfg.sweep.r_min},
                {"r_max", cfg.sweep.r_max},
                {"steps", cfg.sweep.steps}};
  j["bands"] = {{"count", cfg.bands.count},
                {"points", cfg.bands.points},
                {"tune_band", cfg.bands.tune_band},
                {"target_vg_over_c", cfg.bands.target_vg_over_c}};
  j["bb84"] = {{"n_pulses", cfg.bb84.n_pulses},
               {"attack", std::string(to_string(cfg.bb84.attack.kind))},
               {"splitting_ratio", cfg.bb84.attack.splitting_ratio},
               {"z_threshold", cfg.bb84.z_threshold}};
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  return j;
}

}  // namespace heraldq

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldq/bb84.hpp"
#include "heraldq/crystal_bands.hpp"
#include "heraldq/photon_stats.hpp"

namespace heraldq {

/// 12 significant digits, '.' separator, shortest of fixed/scientific.
std::string format_number(double x);

/// n1,n2,p with one row per cell.
std::string joint_csv(const JointDistribution& jd);

/// r,p11,p1,p_one,tail,n_max,ok
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// band_index,k_tilde,omega_tilde,vg_over_c with k_tilde = k L and
/// omega_tilde = omega L / (2 pi c).
std::string bands_csv(const CrystalSpec& spec, const std::vector<BandSolution>& bands);

nlohmann::json to_json(const HeraldedStats& hs);
nlohmann::json to_json(const ThresholdProbs& tp);
nlohmann::json to_json(const SweepMaxima& m);
nlohmann::json to_json(const TuningReport& t);
nlohmann::json to_json(const SessionReport& s);

/// Writes `text` exactly as given ('\n' line endings, no locale).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace heraldq

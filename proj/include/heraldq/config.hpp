#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "heraldq/bb84.hpp"
#include "heraldq/crystal_bands.hpp"
#include "heraldq/source_model.hpp"

namespace heraldq {

struct SweepConfig {
  double alpha = 0.5;
  double r_min = 0.0;
  double r_max = 2.0;
  int steps = 81;
};

struct BandsConfig {
  int count = 8;                  ///< bands exported
  int points = 201;               ///< k samples per band
  int tune_band = 4;
  double target_vg_over_c = 4.59e-3;
};

struct Bb84Config {
  std::uint64_t n_pulses = 1000000;
  AttackModel attack;
  double z_threshold = kDefaultZThreshold;
};

/// Everything a CLI run needs. Defaults reproduce the reference setup:
/// r = 1, alpha = 1/2, the air / LiNbO3 crystal and the 30 mW pump.
struct RunConfig {
  CrystalSpec crystal = CrystalSpec::air_linbo3();
  PumpSpec pump{0.03, 5.0e-6, 1.0, std::nullopt};
  double r = 1.0;
  double alpha = 0.5;
  /// n_max <= 0 means fit it to tail_tolerance.
  int n_max = 0;
  double tail_tolerance = 1e-8;
  SweepConfig sweep;
  BandsConfig bands;
  Bb84Config bb84;
  std::uint64_t seed = 20240101;
  std::filesystem::path output_dir = ".";

  /// Throws ValidationError on any out-of-range field.
  void validate() const;
};

/// Reads a JSON object. Unknown keys and wrong types raise ValidationError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace heraldq

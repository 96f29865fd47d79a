#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "heraldq/config.hpp"
#include "heraldq/error.hpp"
#include "heraldq/report_io.hpp"

using namespace heraldq;
using nlohmann::json;

TEST_CASE("config defaults and round trip") {
  const RunConfig d = config_from_json(json::object());
  CHECK(d.r == 1.0);
  CHECK(d.alpha == 0.5);
  CHECK(d.crystal.l_a == CrystalSpec::air_linbo3().l_a);

  const json j = json::parse(R"({
    "input": {"r": 0.75, "alpha": 0.25},
    "truncation": {"n_max": 30, "tail_tolerance": 1e-6},
    "sweep": {"r_min": 0.1, "r_max": 1.1, "steps": 11},
    "bb84": {"n_pulses": 5000, "attack": "balanced_beam_splitter", "splitting_ratio": 0.3},
    "seed": 99,
    "output_dir": "out"
  })");
  const RunConfig cfg = config_from_json(j);
  CHECK(cfg.r == 0.75);
  CHECK(cfg.n_max == 30);
  CHECK(cfg.bb84.attack.kind == AttackKind::balanced_beam_splitter);
  CHECK(cfg.bb84.attack.splitting_ratio == 0.3);
  CHECK(cfg.seed == 99);

  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("config rejects bad input") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus": 1})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"input": {"r": 1, "beta": 2}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"input": {"r": "one"}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"input": {"r": -1}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bb84": {"attack": "photon_number_split"}})")),
                  ValidationError);
  CHECK_THROWS_AS(config_from_json(json::parse("[1, 2]")), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/heraldq.json"), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "heraldq_bad.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.5e-9) == "1.5e-09");
  CHECK(format_number(-2.0) == "-2");
}

TEST_CASE("csv headers") {
  const auto jd = joint_distribution(SqueezedInput(0.0, 0.0), TruncationPolicy{1, 1e-8});
  std::istringstream in(joint_csv(jd));
  std::string line;
  std::getline(in, line);
  CHECK(line == "n1,n2,p");
  std::getline(in, line);
  CHECK(line == "0,0,1");

  const std::string s = sweep_csv({SweepRow{}});
  CHECK(s.rfind("r,p11,p1,p_one,tail,n_max,ok\n", 0) == 0);

  const auto band = sample_band(CrystalSpec::air_linbo3(), 1, 3);
  const std::string b = bands_csv(CrystalSpec::air_linbo3(), {band});
  CHECK(b.rfind("band_index,k_tilde,omega_tilde,vg_over_c\n1,0,0,", 0) == 0);
}

TEST_CASE("write_text creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "heraldq_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text(dir / "x.txt", "a\nb\n");
  std::ifstream f(dir / "x.txt", std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "a\nb\n");
  std::filesystem::remove_all(dir.parent_path());
}

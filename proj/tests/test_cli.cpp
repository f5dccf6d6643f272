#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "isores/config.hpp"
#include "isores/error.hpp"
#include "isores/runner.hpp"

using namespace isores;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "isores_cli_tests";
  fs::create_directories(p);
  return p;
}

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(nlohmann::json::parse(text));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  return "";
}

const char* sphere_doc = R"({"schema_version": 1, "experiment": "sphere_shift",
  "numerics": {"k_list": [1, 2], "l_max": 4}, "output": {"prefix": "sphere"}})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("errors name the offending field") {
    CHECK(config_error(R"({"schema_version": 1, "experiment": "free_resonances", "numerics": {"thetas": [0.3, "x"]}})").find("numerics.thetas[1]") !=
          std::string::npos);
    CHECK(config_error(R"({"schema_version": 1, "experiment": "free_resonances", "numerics": {"theta": [0.3]}})").find("numerics.theta") !=
          std::string::npos);
    CHECK(config_error(R"({"schema_version": 2})").find("schema_version") != std::string::npos);
    CHECK(config_error(R"({"schema_version": 1, "experiment": "free_resonances", "model": {"kind": "torus"}})").find("model.kind") !=
          std::string::npos);
    CHECK(config_error(R"({"schema_version": 1, "experiment": "free_resonances", "numerics": {"ns": [300, -1]}})").find("numerics.ns[1]") !=
          std::string::npos);
  }

  TEST_CASE("defaults resolve and hash stably") {
    const ExperimentConfig a = parse_config(nlohmann::json::parse(R"({"schema_version": 1, "experiment": "free_resonances"})"));
    const ExperimentConfig b =
        parse_config(nlohmann::json::parse(R"({"schema_version": 1, "experiment": "free_resonances", "numerics": {}})"));
    CHECK(config_hash(a.resolved) == config_hash(b.resolved));
    const ExperimentConfig c = parse_config(
        nlohmann::json::parse(R"({"schema_version": 1, "experiment": "free_resonances", "numerics": {"j_max": 4}})"));
    CHECK(config_hash(a.resolved) != config_hash(c.resolved));
    CHECK(a.resolved["numerics"] == default_config()["numerics"]);
  }

  TEST_CASE("successful run writes identical artifacts twice") {
    const std::string cfg = write_config("sphere.json", sphere_doc);
    std::ostringstream log;
    RunOptions opt;
    opt.check = true;
    opt.out_dir = (scratch_dir() / "a").string();
    REQUIRE(run_config_file(cfg, opt, log) == 0);
    opt.out_dir = (scratch_dir() / "b").string();
    REQUIRE(run_config_file(cfg, opt, log) == 0);
    for (const char* ext : {".csv", ".json"}) {
      const std::string first = slurp(scratch_dir() / "a" / (std::string("sphere") + ext));
      CHECK(!first.empty());
      CHECK(first == slurp(scratch_dir() / "b" / (std::string("sphere") + ext)));
    }
    const std::string csv = slurp(scratch_dir() / "a" / "sphere.csv");
    CHECK(csv.rfind("# tool=isores version=0.1.0 config_hash=", 0) == 0);
    CHECK(csv.find("model,experiment,j_min,j_max,theta,n,t,re_sigma,im_sigma,multiplicity,order,displacement") !=
          std::string::npos);
  }

  TEST_CASE("failed check exits with 1") {
    const std::string cfg = write_config("decay.json", R"({"schema_version": 1, "experiment": "mode_decay",
      "model": {"kind": "hyperbolic_plane"},
      "numerics": {"j_min": 1, "j_max": 3, "decay_n": 200, "cutoff_radius": 3.0}})");
    std::ostringstream log;
    RunOptions opt;
    opt.out_dir = (scratch_dir() / "c").string();
    opt.check = true;
    CHECK(run_config_file(cfg, opt, log) == 1);
    opt.check = false;
    CHECK(run_config_file(cfg, opt, log) == 0);
  }

  TEST_CASE("configuration and numerical errors") {
    std::ostringstream log;
    RunOptions opt;
    opt.out_dir = (scratch_dir() / "d").string();
    CHECK(run_config_file(write_config("bad.json", R"({"schema_version": 1, "bogus": 1})"), opt, log) == 2);
    CHECK(run_config_file((scratch_dir() / "missing.json").string(), opt, log) == 2);
    CHECK(run_config_file(write_config("broken.json", "{ not json"), opt, log) == 2);
    const std::string coarse = write_config("coarse.json", R"({"schema_version": 1, "experiment": "weyl_bounds",
      "numerics": {"j_min": 1, "j_max": 1,
                   "cap": {"warp": "flat", "radius": 1.0, "collar": true, "collar_width": 0.5, "n": 16}}})");
    CHECK(run_config_file(coarse, opt, log) == 3);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reference.hpp"
#include "srsw/ensemble.hpp"
#include "srsw/estimates.hpp"
#include "srsw/io.hpp"

using namespace srsw;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("srsw_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SRSW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_config() {
  return json{
      {"grid", {{"n", 32}, {"length", two_pi}}},
      {"params", {{"epsilon", 1.0}, {"f", 1.0}, {"froude", 1.0}, {"nu", 0.1}, {"eta", 0.1}}},
      {"basis", {{"K", 4}, {"A", 0.05}, {"s", 3.0}}},
      {"ic",
       {{"kind", "analytic"},
        {"mean_h", 1.0},
        {"modes",
         json::array({{{"field", "v1"}, {"k1", 1}, {"k2", 0}, {"phase", "sin"}, {"amplitude", 0.02}},
                      {{"field", "h"}, {"k1", 0}, {"k2", 1}, {"phase", "cos"}, {"amplitude", 0.01}}})}}},
      {"scheme", "em_ito"},
      {"T", 0.1},
      {"dt", 0.01},
      {"R", "inf"},
      {"monitors", {{"R", {5.0}}, {"M", {50.0}}, {"ceiling", 1e6}}},
      {"ensemble", {{"paths", 3}, {"base_seed", 42}}},
  };
}

std::filesystem::path write_config(const json& j, const std::filesystem::path& dir,
                                   const std::string& name = "config.json") {
  const auto path = dir / name;
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

} // namespace

TEST_CASE("state snapshot round-trips bit-exactly") {
  auto grid = TorusGrid::make(32);
  const State a = sample_analytic_state(5, {0.3, 4, 1.0}).realize(grid);
  const auto dir = fresh_dir("snapshot");
  io::write_state_snapshot(a, dir, "state", 1.25, 99);

  double time = 0;
  std::uint64_t seed = 0;
  const State back = io::read_state_snapshot(dir, "state", &time, &seed);
  CHECK(time == 1.25);
  CHECK(seed == 99);
  CHECK(std::memcmp(a.v.x.data(), back.v.x.data(), a.v.x.size() * 8) == 0);
  CHECK(std::memcmp(a.v.y.data(), back.v.y.data(), a.v.y.size() * 8) == 0);
  CHECK(std::memcmp(a.h.data(), back.h.data(), a.h.size() * 8) == 0);

  // writing the reread state reproduces the bytes
  io::write_state_snapshot(back, dir, "state2", time, seed);
  CHECK(slurp(dir / "state_h.bin") == slurp(dir / "state2_h.bin"));
}

TEST_CASE("noise path round-trips bit-exactly") {
  const NoisePath p = sample_path(6, 0.01, 50, 1234);
  const auto dir = fresh_dir("noisepath");
  io::write_noise_path(p, dir, "path");
  const NoisePath back = io::read_noise_path(dir, "path");
  CHECK(back.increments == p.increments);
  CHECK(back.dt == p.dt);
  CHECK(back.seed == p.seed);
  CHECK(back.generator_id == p.generator_id);
}

TEST_CASE("format_double round-trips exactly") {
  for (double x : {0.1, 1.0 / 3.0, 2.0 * std::acos(-1.0), 1e-300, -7.25e17}) {
    const std::string s = io::format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("config parsing: defaults, field validation, hash") {
  const json j = base_config();
  const RunConfig cfg = RunConfig::from_json(j);
  CHECK(cfg.n == 32);
  CHECK(cfg.basis.K == 4);
  CHECK(std::isinf(cfg.R));

  SUBCASE("errors name the offending field") {
    json bad = j;
    bad["params"]["nu"] = -0.1;
    CHECK_THROWS_WITH_AS((void)RunConfig::from_json(bad),
                         doctest::Contains("params.nu"), ConfigError);
    bad = j;
    bad["scheme"] = "rk4";
    CHECK_THROWS_WITH_AS((void)RunConfig::from_json(bad), doctest::Contains("scheme"),
                         ConfigError);
    bad = j;
    bad["ic"]["modes"][0]["field"] = "w";
    CHECK_THROWS_WITH_AS((void)RunConfig::from_json(bad), doctest::Contains("ic.modes"),
                         ConfigError);
  }
  SUBCASE("hash is stable and field-sensitive") {
    CHECK(RunConfig::from_json(j).hash() == cfg.hash());
    json other = j;
    other["T"] = 0.2;
    CHECK(RunConfig::from_json(other).hash() != cfg.hash());
  }
  SUBCASE("stability violation names the binding constraint") {
    json bad = j;
    bad["dt"] = 1.0;
    const RunConfig c2 = RunConfig::from_json(bad);
    GridPtr grid = TorusGrid::make(c2.n, c2.length);
    const State a0 = build_initial_state(c2, grid);
    const NoiseBasis basis = build_basis(c2, grid);
    CHECK_THROWS_WITH_AS(validate_stability(c2, a0, basis), doctest::Contains("stability"),
                         ConfigError);
  }
}

TEST_CASE("ensemble: member 0 equals the single run; rows deterministic") {
  const RunConfig cfg = RunConfig::from_json(base_config());
  const TrajectoryRecord single = run_single(cfg, std::nullopt);
  const EnsembleStats stats = run_ensemble(cfg, cfg.stay_level);
  REQUIRE(stats.rows.size() == 3);
  CHECK(stats.rows[0].final_norm12 == single.norm12.back());
  CHECK(stats.rows[0].seed == derive_seed(cfg.ensemble.base_seed, 0));

  const EnsembleStats again = run_ensemble(cfg, cfg.stay_level);
  for (size_t i = 0; i < stats.rows.size(); ++i) {
    CHECK(stats.rows[i].final_norm12 == again.rows[i].final_norm12);
    CHECK(stats.rows[i].sup_norm12 == again.rows[i].sup_norm12);
  }

  // aggregates recomputable from rows
  int stayed = 0;
  for (const MemberRow& r : stats.rows) stayed += r.stayed ? 1 : 0;
  CHECK(stats.stay_probability == doctest::Approx(double(stayed) / stats.paths));
}

TEST_CASE("cli simulate: artifacts, determinism, exit codes") {
  const auto dir = fresh_dir("cli_sim");
  const auto cfg_path = write_config(base_config(), dir);

  SUBCASE("byte-identical reruns") {
    CHECK(run_cli("simulate --config " + cfg_path.string() + " --out " + (dir / "o1").string() +
                  " --quiet") == 0);
    CHECK(run_cli("simulate --config " + cfg_path.string() + " --out " + (dir / "o2").string() +
                  " --quiet") == 0);
    const std::string csv1 = slurp(dir / "o1" / "norms.csv");
    CHECK(!csv1.empty());
    CHECK(csv1 == slurp(dir / "o2" / "norms.csv"));
    CHECK(slurp(dir / "o1" / "record.json") == slurp(dir / "o2" / "record.json"));
    CHECK(csv1.substr(0, csv1.find('\n')) == "t,norm12,norm22,t22,fR_value,mass");
  }
  SUBCASE("config errors exit 1") {
    json bad = base_config();
    bad["dt"] = 5.0; // violates the stability rule
    const auto bad_path = write_config(bad, dir, "bad.json");
    CHECK(run_cli("simulate --config " + bad_path.string() + " --out " + (dir / "ob").string() +
                  " --quiet") == 1);
    CHECK(run_cli("simulate --config " + (dir / "missing.json").string() + " --quiet") == 1);
  }
  SUBCASE("blow-up exits 2 and still writes partial artifacts") {
    json explode = base_config();
    explode["ic"]["scale_to_norm12"] = 50.0; // already past the ceiling
    explode["monitors"]["ceiling"] = 10.0;
    explode["basis"] = {{"K", 0}};
    explode["dt"] = 1e-3; // satisfies the stability rule at this amplitude
    const auto path = write_config(explode, dir, "explode.json");
    CHECK(run_cli("simulate --config " + path.string() + " --out " + (dir / "ox").string() +
                  " --quiet") == 2);
    CHECK(std::filesystem::exists(dir / "ox" / "norms.csv"));
    const json rec = json::parse(slurp(dir / "ox" / "record.json"));
    CHECK(rec.at("blown_up").get<bool>());
  }
  SUBCASE("seed override changes artifacts") {
    CHECK(run_cli("--seed 7 simulate --config " + cfg_path.string() + " --out " +
                  (dir / "s7").string() + " --quiet") == 0);
    CHECK(run_cli("--seed 8 simulate --config " + cfg_path.string() + " --out " +
                  (dir / "s8").string() + " --quiet") == 0);
    CHECK(slurp(dir / "s7" / "norms.csv") != slurp(dir / "s8" / "norms.csv"));
  }
}

TEST_CASE("cli picard: convergence exit codes and iterate csv") {
  const auto dir = fresh_dir("cli_picard");
  json cfg = base_config();
  cfg["R"] = 1.0;
  cfg["T"] = 0.05;
  cfg["picard"] = {{"tol", 1e6}, {"max_iter", 5}, {"alpha", 0.25}, {"p", 4.0}};
  auto path = write_config(cfg, dir, "huge_tol.json");
  CHECK(run_cli("picard --config " + path.string() + " --out " + (dir / "p1").string() +
                " --quiet") == 0);
  const std::string csv = slurp(dir / "p1" / "iterates.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "n,dist_sup_l2,t22_norm,frac_norm");
  // exactly one iterate row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  cfg["picard"] = {{"tol", 1e-300}, {"max_iter", 1}, {"alpha", 0.25}, {"p", 4.0}};
  path = write_config(cfg, dir, "no_conv.json");
  CHECK(run_cli("picard --config " + path.string() + " --out " + (dir / "p2").string() +
                " --quiet") == 3);
}

TEST_CASE("cli ensemble: deterministic members csv and aggregate json") {
  const auto dir = fresh_dir("cli_ens");
  json cfg = base_config();
  cfg["ensemble"] = {{"paths", 4}, {"base_seed", 11}};
  cfg["monitors"]["stay_level"] = 1.0;
  const auto path = write_config(cfg, dir);

  CHECK(run_cli("ensemble --config " + path.string() + " --out " + (dir / "e1").string() +
                " --quiet") == 0);
  CHECK(run_cli("ensemble --config " + path.string() + " --out " + (dir / "e2").string() +
                " --quiet") == 0);
  CHECK(slurp(dir / "e1" / "members.csv") == slurp(dir / "e2" / "members.csv"));
  const json agg = json::parse(slurp(dir / "e1" / "aggregate.json"));
  CHECK(agg.at("paths").get<int>() == 4);
  CHECK(agg.at("wilson").size() == 2);
  CHECK(agg.contains("stay_probability"));
}

TEST_CASE("cli verify: unknown suite exits 1") {
  const auto dir = fresh_dir("cli_verify");
  CHECK(run_cli("verify --suite nope --out " + dir.string() + " --quiet") == 1);
}

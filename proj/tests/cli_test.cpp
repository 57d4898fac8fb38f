#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qplab/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
#ifdef QPLAB_BIN
  return QPLAB_BIN;
#else
  const char* bin = std::getenv("QPLAB_BIN");
  REQUIRE(bin != nullptr);
  return bin;
#endif
}

int run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int run_capture(const std::string& args, const fs::path& log) {
  const std::string cmd =
      binary() + " " + args + " >" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path("cli_test_tmp") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: fig1 writes five reproducible trajectories") {
  const auto d1 = fresh_dir("fig1_a");
  const auto d2 = fresh_dir("fig1_b");
  REQUIRE(run("fig1 --out " + d1.string()) == 0);
  REQUIRE(run("fig1 --out " + d2.string()) == 0);

  std::size_t n_csv = 0;
  for (int seed = 1; seed <= 5; ++seed) {
    const fs::path csv =
        d1 / ("fig1_seed" + std::to_string(seed) + ".csv");
    REQUIRE(fs::exists(csv));
    ++n_csv;
    const auto traj = qplab::read_trajectory_csv(csv);
    REQUIRE(traj.times.size() == 512);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.values.front() == 0.0);
    // distinct seeds give distinct curves, all byte-reproducible
    REQUIRE(slurp(csv) == slurp(d2 / csv.filename()));
  }
  REQUIRE(n_csv == 5);
  REQUIRE(fs::exists(d1 / "fig1_manifest.json"));
  REQUIRE(fs::exists(d1 / "fig1_combined.dat"));

  // qualitative roughness: many direction reversals in each curve
  for (int seed = 1; seed <= 5; ++seed) {
    const auto traj = qplab::read_trajectory_csv(
        d1 / ("fig1_seed" + std::to_string(seed) + ".csv"));
    int reversals = 0;
    for (std::size_t i = 2; i < traj.values.size(); ++i)
      if ((traj.values[i] - traj.values[i - 1]) *
              (traj.values[i - 1] - traj.values[i - 2]) < 0)
        ++reversals;
    REQUIRE(reversals > 10);
  }

  // different curves for different seeds
  REQUIRE(slurp(d1 / "fig1_seed1.csv") != slurp(d1 / "fig1_seed2.csv"));
}

TEST_CASE("cli: seed flag and environment variable agree") {
  const auto da = fresh_dir("seed_flag");
  const auto db = fresh_dir("seed_env");
  const auto dc = fresh_dir("seed_other");
  REQUIRE(run("wiener --seed 7 --out " + da.string()) == 0);
  const std::string env_cmd = "QPLAB_SEED=7 " + binary() + " wiener --out " +
                              db.string() + " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
  REQUIRE(run("wiener --seed 8 --out " + dc.string()) == 0);
  REQUIRE(slurp(da / "wiener.csv") == slurp(db / "wiener.csv"));
  REQUIRE(slurp(da / "wiener.csv") != slurp(dc / "wiener.csv"));
}

TEST_CASE("cli: config file drives parameters; bad configs exit 2") {
  const auto d = fresh_dir("config");
  const fs::path good = d / "good.json";
  std::ofstream(good) << R"({"ou": {"gamma": 5.0, "grid_points": 64}})";
  REQUIRE(run("ou --config " + good.string() + " --out " + d.string()) == 0);
  const auto traj = qplab::read_trajectory_csv(d / "ou.csv");
  REQUIRE(traj.times.size() == 64);

  const fs::path unknown_root = d / "unknown_root.json";
  std::ofstream(unknown_root) << R"({"bogus": {}})";
  REQUIRE(run("ou --config " + unknown_root.string() + " --out " +
              d.string()) == 2);

  const fs::path unknown_key = d / "unknown_key.json";
  std::ofstream(unknown_key) << R"({"ou": {"gamme": 5.0}})";
  REQUIRE(run("ou --config " + unknown_key.string() + " --out " +
              d.string()) == 2);

  const fs::path malformed = d / "malformed.json";
  std::ofstream(malformed) << "{not json";
  REQUIRE(run("ou --config " + malformed.string() + " --out " + d.string()) ==
          2);

  REQUIRE(run("ou --config " + (d / "missing.json").string() + " --out " +
              d.string()) == 2);
}

TEST_CASE("cli: usage errors exit 2") {
  REQUIRE(run("frobnicate") == 2);
  REQUIRE(run("") == 2);  // a subcommand is required
  REQUIRE(run("ou --no-such-flag") == 2);
}

TEST_CASE("cli: suite --only runs a single criterion and reports PASS") {
  const auto d = fresh_dir("suite_only");
  const fs::path log = d / "suite.log";
  REQUIRE(run_capture("suite --only 10 --out " + d.string(), log) == 0);
  const std::string text = slurp(log);
  REQUIRE(text.find("criterion 10") != std::string::npos);
  REQUIRE(text.find("PASS") != std::string::npos);
  REQUIRE(text.find("criterion  1") == std::string::npos);
  REQUIRE(fs::exists(d / "suite_report.json"));
}

TEST_CASE("cli: fast subcommands succeed end to end") {
  const auto d = fresh_dir("smoke");
  REQUIRE(run("inverse-sum --out " + d.string()) == 0);
  REQUIRE(fs::exists(d / "inverse_sum.json"));
  REQUIRE(fs::exists(d / "inverse_sum.csv"));
  REQUIRE(run("nbml --out " + d.string()) == 0);
  REQUIRE(fs::exists(d / "nbml_report.json"));
  REQUIRE(run("zeno --out " + d.string()) == 0);
  REQUIRE(fs::exists(d / "zeno_survival.csv"));
  REQUIRE(fs::exists(d / "zeno_report.json"));
}

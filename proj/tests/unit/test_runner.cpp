#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sofmdim/errors.hpp"
#include "sofmdim/runner.hpp"

using namespace sofmdim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sofmdim_runner_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string error_field(const nlohmann::json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyGridNamesTheGrid) {
  const nlohmann::json j = {{"experiment", "verify_prop31"},
                            {"seed", 1},
                            {"instances", 3},
                            {"grids", {{"delta", {0.5}}, {"eps", nlohmann::json::array()}, {"p", {1}}}}};
  EXPECT_EQ(error_field(j), "grids.eps");
}

TEST(Config, FieldErrors) {
  EXPECT_EQ(error_field({{"experiment", "nope"}}), "experiment");
  EXPECT_EQ(error_field({{"experiment", "sandwich"}, {"instances", 3}}), "seed");
  EXPECT_EQ(error_field({{"experiment", "sandwich"}, {"seed", 1}, {"instances", 3}, {"typo", 1}}), "typo");
  EXPECT_EQ(error_field({{"experiment", "sandwich"}, {"seed", 1}, {"instances", "3"}}), "instances");
  EXPECT_EQ(error_field({{"experiment", "verify_prop32"}, {"seed", 1}, {"instances", 3},
                         {"grids", {{"delta", {0.5}}, {"eps", {0.5}}, {"p", {"inf"}}, {"lambda", {2}}}}}),
            "grids.p");
  EXPECT_EQ(error_field({{"experiment", "orbit_identity"}, {"stages", {3}}, {"F", {{"1"}}}, {"grids", {{"delta", {1}}}}}),
            "system");
}

TEST(Config, ListsEveryExperiment) {
  EXPECT_EQ(list_experiments().size(), 10u);
  for (const auto& [name, what] : list_experiments()) EXPECT_EQ(to_string(experiment_from_string(name)), name);
}

TEST(Runner, ShippedProp31SmokeConfig) {
  auto c = load_config(fs::path(SOFMDIM_CONFIG_DIR) / "prop31_smoke.json");
  const auto first = scratch("smoke_a");
  c.out_dir = first;
  const auto s = run_experiment(c);
  EXPECT_EQ(s.total, 10u);
  EXPECT_EQ(s.passes, 10u);
  EXPECT_EQ(s.failures, 0u);
  EXPECT_EQ(s.passes + s.failures, s.total);

  c.out_dir = scratch("smoke_b");
  c.jobs = 3;
  run_experiment(c);
  EXPECT_EQ(slurp(first / "prop31_smoke_report.csv"),
            slurp(c.out_dir / "prop31_smoke_report.csv"));
}

TEST(Runner, GuardOverflowNamesInstance) {
  const nlohmann::json j = {{"experiment", "verify_prop31"},
                            {"seed", 3},
                            {"instances", 4},
                            {"guards", {{"exhaustive_guard", 1}}},
                            {"grids", {{"delta", {0.5}}, {"eps", {0.5}}, {"p", {1}}}},
                            {"out", scratch("guard").string()}};
  try {
    run_experiment(parse_config(j));
    FAIL() << "expected a guard overflow";
  } catch (const GuardExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("instance "), std::string::npos);
  }
}

TEST(Runner, ProbeTableIsComplete) {
  const auto dir = scratch("probe");
  const nlohmann::json j = {{"experiment", "probe_conjecture"},
                            {"seed", 11},
                            {"system", {{"kind", "periodic_shift"}, {"alphabet", {0, 1}}, {"period", 3}}},
                            {"stages", {2, 3}},
                            {"F", {{"1"}, {"1", "2"}}},
                            {"grids", {{"delta", {0.3, 1.0}}, {"eps", {0.5}}, {"p", {1, "inf"}}}},
                            {"out", dir.string()}};
  const auto s = run_experiment(parse_config(j));
  EXPECT_EQ(s.total, 8u);
  const auto proxies = slurp(dir / "probe_conjecture_proxies.csv");
  EXPECT_EQ(std::count(proxies.begin(), proxies.end(), '\n'), 9);
}

TEST(Runner, EnvironmentSuppliesDefaultOutDir) {
  const auto dir = scratch("env");
  setenv(kOutDirEnv, dir.c_str(), 1);
  const auto c = parse_config({{"experiment", "sandwich"}, {"seed", 1}, {"instances", 2}});
  unsetenv(kOutDirEnv);
  EXPECT_EQ(c.out_dir, dir);
}

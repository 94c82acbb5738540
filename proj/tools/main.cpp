// sofmdim: config-driven runner for the verification suites and sweeps.
//
// Exit codes: 0 success, 1 assertion failure, 2 config error, 3 guard overflow.

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sofmdim/errors.hpp"
#include "sofmdim/runner.hpp"
#include "sofmdim/serialize.hpp"

namespace {

enum Exit { kOk = 0, kAssertion = 1, kConfig = 2, kGuard = 3 };

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const sofmdim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const sofmdim::GuardExceeded& e) {
    std::cerr << "guard overflow: " << e.what() << '\n';
    return kGuard;
  } catch (const sofmdim::InexactCount& e) {
    std::cerr << "guard overflow: " << e.what() << '\n';
    return kGuard;
  } catch (const sofmdim::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sofic metric mean dimension experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;

  auto* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("config", config_path, "Config file (JSON)")->required();

  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("config", config_path, "Config file (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  run->add_option("--out", out, "Output directory (default: $SOFMDIM_OUT_DIR or ./results)");

  auto* list = app.add_subcommand("list-experiments", "List experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (list->parsed()) {
    for (const auto& [name, what] : sofmdim::list_experiments()) std::cout << name << "  " << what << '\n';
    return kOk;
  }

  if (validate->parsed()) {
    return guarded([&] {
      const auto config = sofmdim::load_config(config_path);
      std::cout << "ok: " << sofmdim::to_string(config.kind) << '\n';
      return static_cast<int>(kOk);
    });
  }

  return guarded([&] {
    auto raw = sofmdim::read_config_json(config_path);
    if (!raw.is_object()) throw sofmdim::ConfigError("config", "expected an object");
    if (seed) raw["seed"] = *seed;
    if (jobs) raw["jobs"] = *jobs;
    if (out) raw["out"] = *out;
    const auto config = sofmdim::parse_config(raw);
    const auto summary = sofmdim::run_experiment(config);
    std::cout << sofmdim::to_string(config.kind) << ": " << summary.passes << "/" << summary.total
              << " passed, " << summary.failures << " failed in "
              << sofmdim::format_double(summary.wall_seconds) << " s\n";
    for (const auto& [name, slack] : summary.min_slack)
      std::cout << "  min slack " << name << " = " << sofmdim::format_double(slack) << '\n';
    for (const auto& f : summary.files) std::cout << "  wrote " << f.string() << '\n';
    return static_cast<int>(summary.failures == 0 ? kOk : kAssertion);
  });
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/instances.hpp"
#include "sofmdim/mapspace.hpp"

namespace sofmdim {

enum class ExperimentKind {
  verify_prop31,
  verify_prop32,
  verify_lemma51,
  verify_thm52,
  sandwich,
  sofic_check,
  orbit_identity,
  mdim_amenable,
  mdim_sofic,
  probe_conjecture,
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& name);
/// Every kind with a one-line description.
std::vector<std::pair<std::string, std::string>> list_experiments();

/// Named dynamical system for the sweep and identity experiments.
struct SystemConfig {
  /// periodic_shift | grid_interval_shift | random
  std::string kind = "periodic_shift";
  std::vector<double> alphabet{0.0, 1.0};
  std::size_t period = 3;
  std::size_t m = 2;
  std::string group = "integers";
  std::size_t points = 4;
  std::string style = "euclidean";
  bool bijective = true;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sandwich;
  std::optional<std::uint64_t> seed;
  std::size_t instances = 0;

  SandwichFamily sandwich;
  MapFamily map;
  ProductFamily product;
  std::optional<SystemConfig> system;

  /// Group for sofic_check; other kinds take it from the system.
  std::string group = "integers";
  /// folner | folner_random_gamma | random
  std::string sofic = "folner";
  /// Folner interval lengths [0, n), or d for random sofic stages.
  std::vector<std::size_t> stages;
  /// Each entry lists group elements in canonical form.
  std::vector<std::vector<std::string>> F;
  std::vector<std::string> elements;
  std::vector<double> delta, eps, p, lambda;
  double tail_fraction = 0.5;
  SolveMode mode = SolveMode::exact;

  MapSpaceOptions mapspace;
  InstanceGuard instance_guard;

  std::filesystem::path out_dir;
  std::string prefix;
  std::size_t jobs = 1;
};

/// Name of the environment variable supplying the default output directory.
inline constexpr const char* kOutDirEnv = "SOFMDIM_OUT_DIR";

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Raw JSON of a config file; throws ConfigError on unreadable or invalid JSON.
nlohmann::json read_config_json(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& config);

struct RunSummary {
  std::size_t total = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  double wall_seconds = 0.0;
  std::map<std::string, double> min_slack;
  std::vector<std::filesystem::path> files;
};

/// Runs the experiment and writes its files under out_dir with the config's
/// prefix. Throws GuardExceeded naming the instance on guard overflow.
RunSummary run_experiment(const ExperimentConfig& config);

nlohmann::json summary_to_json(const RunSummary& summary);

}  // namespace sofmdim

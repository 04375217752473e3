#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfd/atmosphere.hpp"
#include "dfd/config.hpp"
#include "dfd/constraints.hpp"
#include "dfd/demise.hpp"
#include "dfd/genome.hpp"
#include "dfd/placement.hpp"
#include "dfd/ini.hpp"
#include "dfd/materials.hpp"
#include "dfd/survivability.hpp"

namespace dfd {

struct GaParams {
  int population_size = 80;
  int generations = 60;
  double p_crossover = 0.95;
  double p_mutation = 0.01;
  double eta_c = 20.0;
  double eta_m = 20.0;
  std::uint64_t seed = 1;
  int init_attempt_factor = 50;  // generation-0 sampling budget, x population
};

/// Throws InvariantError.
void validate(const GaParams& p);

/// `[mission]` contents. Tank, wheel and battery parameters are present when
/// the configuration has components of that kind.
struct MissionParams {
  std::optional<TankDesignParams> tank;
  std::optional<RwDesignParams> rw;
  std::optional<BatteryDesignParams> battery;
  TrajectoryState entry;
  ReentryEvents events;
  double lifetime_years = 10.0;
};

/// Everything an evaluation needs, loaded once and shared read-only.
struct Scenario {
  std::string path;
  IniDocument doc;  // after overrides
  SpacecraftConfig config;
  MaterialDatabase materials;
  BatteryCatalogue cells;
  std::vector<BatteryChemistry> chemistries = builtin_chemistries();
  Atmosphere atmosphere = Atmosphere::constant(0.0);
  DebrisEnvironment environment;
  MissionParams mission;
  SurvivabilitySettings survivability;
  DemiseOptions demise;
  double grid_resolution = kDefaultGridResolution;
  GaParams ga;
  std::vector<GeneSpec> genes;
  std::map<std::string, std::string> data_files;  // role -> absolute path
};

/// One problem found while loading, tagged with the stage and error kind.
struct Diagnostic {
  std::string stage;
  std::string kind;
  std::string message;
};

struct ScenarioReport {
  std::optional<Scenario> scenario;  // set when every stage succeeded
  std::vector<Diagnostic> diagnostics;
  bool io_failure = false;
};

/// Loads every stage it can and collects every problem instead of stopping
/// at the first one.
ScenarioReport inspect_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

/// Same, but throws the first problem as its original error type.
Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

/// Resolves a `[data]` path: absolute as is; relative against the scenario
/// directory, then $DFD_DATA_DIR, then the bundled data directory.
std::string resolve_data_path(const std::string& value, const std::string& scenario_dir);

/// Scenario text reproducing `config` with the rest of the scenario's
/// sections, and data paths made absolute.
std::string scenario_with_config(const Scenario& scenario, const SpacecraftConfig& config);

}  // namespace dfd

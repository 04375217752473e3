#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dfd/demise.hpp"
#include "dfd/genome.hpp"
#include "dfd/scenario.hpp"
#include "dfd/survivability.hpp"

namespace dfd {

struct Fitness {
  double lmf = 0.0;
  double pnp = 0.0;
  bool operator==(const Fitness&) const = default;
};

/// Reason codes: tank-strength, rw-bounds, rw-integrity, battery, placement,
/// ble-material, survivability, decode, demise, config.
struct Dead {
  std::string reason;
  std::string detail;
  bool operator==(const Dead&) const = default;
};

using Verdict = std::variant<Fitness, Dead>;

inline bool is_alive(const Verdict& v) { return std::holds_alternative<Fitness>(v); }

struct Realization {
  SpacecraftConfig config;          // sized, expanded and repaired
  std::vector<std::string> audit;   // one line per check
  std::optional<Dead> dead;
};

/// Constraint checks and derived sizes (tank radii, wheel radius, battery
/// cell count), instance expansion and placement repair. `genes` provides the
/// wheel radius bounds when the radius is optimised.
Realization realize(const SpacecraftConfig& applied, const Scenario& scenario,
                    const std::vector<GeneSpec>& genes = {});

struct Evaluation {
  Verdict verdict = Dead{"config", "not evaluated"};
  Realization realization;
  std::optional<ReentryResult> reentry;
  std::vector<PenetrationResult> penetration;
  bool pnp_clamped = false;
};

/// Full pipeline on an already decoded configuration. Never throws for
/// model-level failures; they become Dead verdicts.
Evaluation evaluate_config(const SpacecraftConfig& applied, const Scenario& scenario,
                           const std::vector<GeneSpec>& genes = {});

/// Decode then evaluate.
Verdict evaluate(const Genome& genome, const Scenario& scenario);

}  // namespace dfd

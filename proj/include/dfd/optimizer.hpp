#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfd/evaluate.hpp"
#include "dfd/genome.hpp"
#include "dfd/rng.hpp"
#include "dfd/scenario.hpp"

namespace dfd {

/// SBX with one spread factor per gene, applied to each gene with
/// probability 0.5. Integer genes are crossed on the relaxed range
/// [lo - 0.5, hi + 0.5] and rounded. `unclipped` receives the children before
/// clipping and rounding.
std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2, const std::vector<GeneSpec>& specs,
                                        double eta_c, Rng& rng,
                                        std::pair<Genome, Genome>* unclipped = nullptr);

/// Bounded polynomial mutation, each gene with probability `p_m`.
Genome polynomial_mutation(const Genome& g, const std::vector<GeneSpec>& specs, double eta_m, double p_m,
                           Rng& rng);

/// Fronts of indices, best first, both objectives maximised.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Fitness>& points);

bool dominates(const Fitness& a, const Fitness& b);

/// Crowding distance of each member of `front` (same order); boundary
/// points get infinity.
std::vector<double> crowding_distance(const std::vector<Fitness>& points, const std::vector<std::size_t>& front);

/// Area dominated by `points` above the reference point (0, 0).
double hypervolume(const std::vector<Fitness>& points);

/// Uniform random genome.
Genome random_genome(const std::vector<GeneSpec>& specs, Rng& rng);

struct GenerationStats {
  int generation = 0;
  double hypervolume = 0.0;
  int feasible = 0;     // alive among the individuals evaluated this generation
  int evaluated = 0;
  int front_size = 0;
  double best_lmf = 0.0;
  double best_pnp = 0.0;
};

struct ParetoSolution {
  Genome genome;
  Fitness fitness;
  std::optional<SpacecraftConfig> applied;   // decoded, before sizing
  std::optional<SpacecraftConfig> realized;  // sized, expanded, repaired
  std::vector<std::string> audit;
};

struct RunResult {
  std::vector<ParetoSolution> front;  // deduplicated, sorted by (lmf, -pnp, genome)
  std::vector<GenerationStats> history;
  std::size_t evaluations = 0;  // distinct genomes evaluated
  std::size_t cache_hits = 0;
};

struct RunOptions {
  int workers = 1;
  std::function<void(const GenerationStats&)> on_generation;
};

using Evaluator = std::function<Verdict(const Genome&)>;

/// (mu + lambda) NSGA-II. Dead individuals never enter the population; the
/// first generation is resampled until it is fully alive, within
/// init_attempt_factor x population draws (a short population is topped up
/// by repeating the alive ones). Throws InitializationError if nothing alive
/// is found. Deterministic for a given seed regardless of `workers`.
RunResult run_nsga2(const std::vector<GeneSpec>& specs, const Evaluator& evaluate, const GaParams& params,
                    const RunOptions& options = {});

/// Same over a scenario; solutions carry their decoded configurations.
RunResult run_nsga2(const Scenario& scenario, const GaParams& params, const RunOptions& options = {});

}  // namespace dfd

#include "dfd/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "dfd/error.hpp"

namespace dfd {

namespace {

struct Range {
  double lo, hi;
};

Range relaxed(const GeneSpec& s) {
  if (s.is_integer()) return {-0.5, static_cast<double>(s.options.size()) - 0.5};
  return {s.lo, s.hi};
}

double settle(const GeneSpec& s, double x) {
  if (s.is_integer()) {
    double k = std::floor(x + 0.5);
    return std::clamp(k, 0.0, static_cast<double>(s.options.size() - 1));
  }
  return std::clamp(x, s.lo, s.hi);
}

}  // namespace

std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2, const std::vector<GeneSpec>& specs,
                                        double eta_c, Rng& rng, std::pair<Genome, Genome>* unclipped) {
  Genome c1 = p1, c2 = p2;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (rng.uniform() >= 0.5) continue;
    double x1 = p1[i], x2 = p2[i];
    if (std::abs(x1 - x2) < 1e-14) continue;
    double u = rng.uniform();
    double beta = u <= 0.5 ? std::pow(2 * u, 1 / (eta_c + 1)) : std::pow(1 / (2 * (1 - u)), 1 / (eta_c + 1));
    c1[i] = 0.5 * ((1 + beta) * x1 + (1 - beta) * x2);
    c2[i] = 0.5 * ((1 - beta) * x1 + (1 + beta) * x2);
  }
  if (unclipped) *unclipped = {c1, c2};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    c1[i] = settle(specs[i], c1[i]);
    c2[i] = settle(specs[i], c2[i]);
  }
  return {c1, c2};
}

Genome polynomial_mutation(const Genome& g, const std::vector<GeneSpec>& specs, double eta_m, double p_m, Rng& rng) {
  Genome out = g;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (rng.uniform() >= p_m) continue;
    auto [yl, yu] = relaxed(specs[i]);
    if (yu <= yl) continue;
    double y = out[i];
    double d1 = (y - yl) / (yu - yl), d2 = (yu - y) / (yu - yl);
    double r = rng.uniform();
    double mp = 1 / (eta_m + 1);
    double dq;
    if (r < 0.5) {
      double val = 2 * r + (1 - 2 * r) * std::pow(1 - d1, eta_m + 1);
      dq = std::pow(val, mp) - 1;
    } else {
      double val = 2 * (1 - r) + 2 * (r - 0.5) * std::pow(1 - d2, eta_m + 1);
      dq = 1 - std::pow(val, mp);
    }
    out[i] = settle(specs[i], std::clamp(y + dq * (yu - yl), yl, yu));
  }
  return out;
}

bool dominates(const Fitness& a, const Fitness& b) {
  return a.lmf >= b.lmf && a.pnp >= b.pnp && (a.lmf > b.lmf || a.pnp > b.pnp);
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Fitness>& pts) {
  std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(pts[p], pts[q])) {
        dominated[p].push_back(q);
      } else if (dominates(pts[q], pts[p])) {
        ++count[p];
      }
    }
    if (count[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t k = 0; !fronts[k].empty(); ++k) {
    std::vector<std::size_t> next;
    for (auto p : fronts[k]) {
      for (auto q : dominated[p]) {
        if (--count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<Fitness>& pts, const std::vector<std::size_t>& front) {
  std::size_t m = front.size();
  std::vector<double> dist(m, 0.0);
  if (m <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  for (int obj = 0; obj < 2; ++obj) {
    auto val = [&](std::size_t k) { return obj == 0 ? pts[front[k]].lmf : pts[front[k]].pnp; };
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val(a) < val(b); });
    double span = val(order.back()) - val(order.front());
    dist[order.front()] = dist[order.back()] = std::numeric_limits<double>::infinity();
    if (span <= 0) continue;
    for (std::size_t k = 1; k + 1 < m; ++k) dist[order[k]] += (val(order[k + 1]) - val(order[k - 1])) / span;
  }
  return dist;
}

double hypervolume(const std::vector<Fitness>& pts) {
  std::vector<Fitness> s = pts;
  std::sort(s.begin(), s.end(), [](const Fitness& a, const Fitness& b) {
    return a.lmf != b.lmf ? a.lmf > b.lmf : a.pnp > b.pnp;
  });
  double hv = 0, prev = 0;
  for (const auto& p : s) {
    if (p.lmf <= 0 || p.pnp <= prev) continue;
    hv += p.lmf * (p.pnp - prev);
    prev = p.pnp;
  }
  return hv;
}

Genome random_genome(const std::vector<GeneSpec>& specs, Rng& rng) {
  Genome g;
  g.reserve(specs.size());
  for (const auto& s : specs) {
    if (s.is_integer()) {
      g.push_back(static_cast<double>(rng.below(s.options.size())));
    } else {
      g.push_back(rng.uniform(s.lo, s.hi));
    }
  }
  return g;
}

namespace {

class EvaluationCache {
public:
  EvaluationCache(const Evaluator& f, int workers) : f_(f), workers_(std::max(1, workers)) {}

  std::vector<Verdict> run(const std::vector<Genome>& batch) {
    std::vector<const Genome*> todo;
    std::map<Genome, std::size_t> pending;
    for (const auto& g : batch) {
      if (cache_.count(g)) {
        ++hits_;
      } else if (!pending.count(g)) {
        pending.emplace(g, todo.size());
        todo.push_back(&g);
      } else {
        ++hits_;
      }
    }

    std::vector<std::optional<Verdict>> results(todo.size());
    std::vector<std::exception_ptr> errors(todo.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= todo.size()) return;
        try {
          results[i] = f_(*todo[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    int n = static_cast<int>(std::min<std::size_t>(workers_, todo.size()));
    if (n <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int k = 0; k < n; ++k) pool.emplace_back(work);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(*todo[i], std::move(*results[i]));

    std::vector<Verdict> out;
    out.reserve(batch.size());
    for (const auto& g : batch) out.push_back(cache_.at(g));
    return out;
  }

  std::size_t size() const { return cache_.size(); }
  std::size_t hits() const { return hits_; }

private:
  const Evaluator& f_;
  int workers_;
  std::map<Genome, Verdict> cache_;
  std::size_t hits_ = 0;
};

struct Population {
  std::vector<Genome> genomes;
  std::vector<Fitness> fitness;
  std::vector<int> rank;
  std::vector<double> crowding;

  void add(Genome g, Fitness f) {
    genomes.push_back(std::move(g));
    fitness.push_back(f);
  }

  void rank_and_crowd() {
    rank.assign(genomes.size(), 0);
    crowding.assign(genomes.size(), 0.0);
    auto fronts = nondominated_sort(fitness);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
      auto d = crowding_distance(fitness, fronts[k]);
      for (std::size_t j = 0; j < fronts[k].size(); ++j) {
        rank[fronts[k][j]] = static_cast<int>(k);
        crowding[fronts[k][j]] = d[j];
      }
    }
  }

  std::size_t tournament(Rng& rng) const {
    std::size_t a = rng.below(genomes.size()), b = rng.below(genomes.size());
    if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
    if (crowding[a] != crowding[b]) return crowding[a] > crowding[b] ? a : b;
    return std::min(a, b);
  }
};

Population select_survivors(const Population& merged, std::size_t n) {
  auto fronts = nondominated_sort(merged.fitness);
  Population next;
  for (const auto& front : fronts) {
    if (next.genomes.size() + front.size() <= n) {
      for (auto i : front) next.add(merged.genomes[i], merged.fitness[i]);
      continue;
    }
    auto d = crowding_distance(merged.fitness, front);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d[a] > d[b]; });
    for (std::size_t k = 0; next.genomes.size() < n; ++k) {
      next.add(merged.genomes[front[order[k]]], merged.fitness[front[order[k]]]);
    }
    break;
  }
  return next;
}

GenerationStats stats_of(const Population& pop, int generation, int evaluated, int feasible) {
  GenerationStats s;
  s.generation = generation;
  s.evaluated = evaluated;
  s.feasible = feasible;
  auto fronts = nondominated_sort(pop.fitness);
  std::vector<Fitness> f0;
  if (!fronts.empty()) {
    for (auto i : fronts[0]) f0.push_back(pop.fitness[i]);
  }
  s.front_size = static_cast<int>(f0.size());
  s.hypervolume = hypervolume(f0);
  for (const auto& f : f0) {
    s.best_lmf = std::max(s.best_lmf, f.lmf);
    s.best_pnp = std::max(s.best_pnp, f.pnp);
  }
  return s;
}

}  // namespace

RunResult run_nsga2(const std::vector<GeneSpec>& specs, const Evaluator& evaluate, const GaParams& params,
                    const RunOptions& options) {
  validate(params);
  if (specs.empty()) throw ConfigError("nothing to optimise: no [optimize.*] genes");
  Rng rng(params.seed);
  EvaluationCache cache(evaluate, options.workers);
  RunResult result;
  auto n = static_cast<std::size_t>(params.population_size);

  Population pop;
  std::size_t budget = n * static_cast<std::size_t>(params.init_attempt_factor);
  std::size_t drawn = 0;
  int evaluated = 0, feasible = 0;
  while (pop.genomes.size() < n && drawn < budget) {
    std::size_t batch_size = std::min(n - pop.genomes.size(), budget - drawn);
    std::vector<Genome> batch;
    for (std::size_t k = 0; k < batch_size; ++k) batch.push_back(random_genome(specs, rng));
    drawn += batch_size;
    auto verdicts = cache.run(batch);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      ++evaluated;
      if (const auto* f = std::get_if<Fitness>(&verdicts[k])) {
        ++feasible;
        pop.add(batch[k], *f);
      }
    }
  }
  if (pop.genomes.empty()) {
    throw InitializationError("no feasible individual in " + std::to_string(drawn) + " random draws");
  }
  for (std::size_t k = 0; pop.genomes.size() < n; ++k) pop.add(pop.genomes[k], pop.fitness[k]);

  auto record = [&](const GenerationStats& s) {
    result.history.push_back(s);
    if (options.on_generation) options.on_generation(s);
  };
  record(stats_of(pop, 0, evaluated, feasible));

  for (int gen = 1; gen <= params.generations; ++gen) {
    pop.rank_and_crowd();
    std::vector<Genome> offspring;
    while (offspring.size() < n) {
      const auto& a = pop.genomes[pop.tournament(rng)];
      const auto& b = pop.genomes[pop.tournament(rng)];
      std::pair<Genome, Genome> kids{a, b};
      if (rng.uniform() < params.p_crossover) kids = sbx_crossover(a, b, specs, params.eta_c, rng);
      offspring.push_back(polynomial_mutation(kids.first, specs, params.eta_m, params.p_mutation, rng));
      if (offspring.size() < n) {
        offspring.push_back(polynomial_mutation(kids.second, specs, params.eta_m, params.p_mutation, rng));
      }
    }
    auto verdicts = cache.run(offspring);
    Population merged = pop;
    int alive = 0;
    for (std::size_t k = 0; k < offspring.size(); ++k) {
      if (const auto* f = std::get_if<Fitness>(&verdicts[k])) {
        ++alive;
        merged.add(offspring[k], *f);
      }
    }
    pop = select_survivors(merged, n);
    record(stats_of(pop, gen, static_cast<int>(offspring.size()), alive));
  }

  auto fronts = nondominated_sort(pop.fitness);
  std::map<Genome, Fitness> unique;
  for (auto i : fronts.front()) unique.emplace(pop.genomes[i], pop.fitness[i]);
  for (const auto& [g, f] : unique) result.front.push_back({g, f, std::nullopt, std::nullopt, {}});
  std::stable_sort(result.front.begin(), result.front.end(), [](const ParetoSolution& a, const ParetoSolution& b) {
    if (a.fitness.lmf != b.fitness.lmf) return a.fitness.lmf < b.fitness.lmf;
    if (a.fitness.pnp != b.fitness.pnp) return a.fitness.pnp > b.fitness.pnp;
    return a.genome < b.genome;
  });
  result.evaluations = cache.size();
  result.cache_hits = cache.hits();
  return result;
}

RunResult run_nsga2(const Scenario& scenario, const GaParams& params, const RunOptions& options) {
  Evaluator f = [&scenario](const Genome& g) { return evaluate(g, scenario); };
  auto result = run_nsga2(scenario.genes, f, params, options);
  for (auto& s : result.front) {
    s.applied = apply_genome(scenario.config, scenario.genes, s.genome);
    auto ev = evaluate_config(*s.applied, scenario, scenario.genes);
    s.realized = ev.realization.config;
    s.audit = ev.realization.audit;
  }
  return result;
}

}  // namespace dfd

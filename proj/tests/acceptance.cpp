#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dfd/cli.hpp"
#include "dfd/constraints.hpp"
#include "dfd/demise.hpp"
#include "dfd/evaluate.hpp"
#include "dfd/ini.hpp"
#include "dfd/optimizer.hpp"
#include "dfd/placement.hpp"
#include "dfd/scenario.hpp"
#include "dfd/survivability.hpp"
#include "dfd/text.hpp"

using namespace dfd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string data_path(const std::string& rel) { return std::string(DFD_SOURCE_DATA_DIR) + "/" + rel; }
std::string scenario_path(const std::string& name) { return data_path("scenarios/" + name); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << ": " << title << " (" << std::fixed
            << std::setprecision(2) << seconds_since(t0) << " s)" << std::defaultfloat << "\n     "
            << o.detail.str() << "\n";
}

TankDesignParams tank_params() {
  TankDesignParams p;
  p.m_f = 220;
  p.rho_f = 1020;
  p.p = 4e6;
  p.sf = 1.5;
  p.k1 = 1.4;
  return p;
}

ComponentNode sphere_tank(const std::string& material, double t) {
  ComponentNode n;
  n.id = 10;
  n.name = "tank";
  n.kind = ComponentKind::Tank;
  n.shape = SphereShape{0.4};
  n.material = material;
  n.wall_thickness = t;
  return n;
}

std::vector<Genome> enumerate(const std::vector<GeneSpec>& specs) {
  std::vector<Genome> all{{}};
  for (const auto& s : specs) {
    std::vector<Genome> next;
    for (const auto& g : all) {
      for (std::size_t k = 0; k < s.options.size(); ++k) {
        auto h = g;
        h.push_back(static_cast<double>(k));
        next.push_back(std::move(h));
      }
    }
    all = std::move(next);
  }
  return all;
}

std::vector<int> brute_force_ranks(const std::vector<Fitness>& pts) {
  std::vector<int> rank(pts.size(), -1);
  std::size_t assigned = 0;
  for (int level = 0; assigned < pts.size(); ++level) {
    std::vector<std::size_t> now;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (rank[i] >= 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
        dominated = j != i && rank[j] < 0 && dominates(pts[j], pts[i]);
      }
      if (!dominated) now.push_back(i);
    }
    for (auto i : now) rank[i] = level;
    assigned += now.size();
  }
  return rank;
}

SpacecraftConfig cube_parent(double side) {
  std::ostringstream os;
  os << "[parent]\nmass = 2000\nl = " << side << "\nw = " << side << "\nh = " << side
     << "\nmaterial = Al-6061-T6\nthickness = 0.003\n";
  return config_from_ini(IniDocument::parse(os.str()));
}

TrajectoryState entry_state() {
  TrajectoryState s;
  s.altitude = 120000;
  s.velocity = 7800;
  s.heading = -8.0 * 3.141592653589793 / 180.0;
  return s;
}

void tank_sizing(Outcome& o) {
  auto p = tank_params();
  double v = tank_volume(p);
  double r1 = tank_radius(v, 1, TankShape::Sphere);
  double r3 = tank_radius(v, 3, TankShape::Sphere);
  double e1 = std::abs(r1 - 0.42) / 0.42, e3 = std::abs(r3 - 0.291) / 0.291;
  o.detail << "V = " << v << " m3, r(1) = " << r1 << " m (vs 0.42: " << 100 * e1 << "%), r(3) = " << r3
           << " m (vs 0.291: " << 100 * e3 << "%)";
  o.require(std::abs(r1 - 0.416) < 5e-4, "r(1) = 0.416");
  o.require(std::abs(r3 - 0.289) < 5e-4, "r(3) = 0.289");
  o.require(e1 < 0.02 && e3 < 0.02, "within 2% of the reference radii");
}

void constraint_screening(Outcome& o) {
  auto db = load_materials(data_path("materials.csv"));
  auto p = tank_params();
  int al_feasible = 0;
  for (int i = 1; i <= 6; ++i) {
    al_feasible += !is_rejected(check_tank(sphere_tank("Al-6061-T6", 0.0005 * i), p, db));
  }
  bool ti = !is_rejected(check_tank(sphere_tank("Titanium 6Al4V", 0.003), p, db));
  bool ti29 = !is_rejected(check_tank(sphere_tank("Titanium 6Al4V", 0.0029), p, db));
  double r = tank_radius(tank_volume(p), 1, TankShape::Sphere);
  o.detail << "single sphere r = " << r << " m: Al-6061-T6 feasible at " << al_feasible
           << " of 6 thicknesses <= 3 mm (stress at 3 mm " << tank_wall_stress(r, 0.003, p.p, p.sf, TankShape::Sphere) / 1e6
           << " MPa vs 276); Ti-6Al4V at 3 mm " << (ti ? "feasible" : "rejected") << ", at 2.9 mm "
           << (ti29 ? "feasible" : "rejected");
  o.require(al_feasible == 0, "aluminium rejected");
  o.require(ti && ti29, "titanium feasible");
}

void oracle_equivalence(Outcome& o) {
  auto t0 = Clock::now();
  auto sc = load_scenario(scenario_path("tank_discrete.ini"));
  auto all = enumerate(sc.genes);
  std::vector<Genome> alive;
  std::vector<Fitness> fit;
  for (const auto& g : all) {
    auto v = evaluate(g, sc);
    if (const auto* f = std::get_if<Fitness>(&v)) {
      alive.push_back(g);
      fit.push_back(*f);
    }
  }
  auto fronts = nondominated_sort(fit);
  std::set<Genome> oracle;
  for (auto i : fronts.front()) oracle.insert(alive[i]);
  o.detail << all.size() << " genomes, " << alive.size() << " feasible, oracle front " << oracle.size()
           << "; GA " << sc.ga.population_size << " x " << sc.ga.generations << " gens, seeds 1-5:";
  int matched = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = sc.ga;
    p.seed = seed;
    auto run = run_nsga2(sc, p);
    std::set<Genome> got;
    for (const auto& s : run.front) got.insert(s.genome);
    bool same = got == oracle;
    matched += same;
    o.detail << " " << (same ? "match" : "MISMATCH");
  }
  double secs = seconds_since(t0);
  o.require(all.size() <= 200, "<= 200 genomes");
  o.require(sc.ga.generations <= 60, "<= 60 generations");
  o.require(matched == 5, "5 of 5 seeds");
  o.require(secs < 60, "under a minute");
}

void nsga_invariants(Outcome& o) {
  Rng rng(20240601);
  int sort_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Fitness> pts;
    for (int i = 0; i < 100; ++i) {
      double a = rng.uniform(), b = rng.uniform();
      if (trial % 2) a = std::floor(a * 10) / 10, b = std::floor(b * 10) / 10;
      pts.push_back({a, b});
    }
    auto fronts = nondominated_sort(pts);
    std::vector<int> got(pts.size(), -1);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
      for (auto i : fronts[k]) got[i] = static_cast<int>(k);
    }
    sort_ok += got == brute_force_ranks(pts);
  }

  GeneSpec x;
  x.label = "x";
  x.component_id = 1;
  x.lo = 0;
  x.hi = 1;
  GeneSpec k = x;
  k.options = {"1", "2", "3", "4", "5", "6"};
  GeneSpec t = x;
  t.lo = 0.0005;
  t.hi = 0.005;
  std::vector<GeneSpec> specs{x, k, t};

  double worst = 0;
  int violations = 0;
  for (int i = 0; i < 100000; ++i) {
    auto a = random_genome(specs, rng), b = random_genome(specs, rng);
    std::pair<Genome, Genome> raw;
    auto [c1, c2] = sbx_crossover(a, b, specs, 20, rng, &raw);
    for (std::size_t j = 0; j < specs.size(); ++j) {
      worst = std::max(worst, std::abs(raw.first[j] + raw.second[j] - a[j] - b[j]));
    }
    auto m = polynomial_mutation(c1, specs, 20, 1.0, rng);
    for (const auto* g : {&c1, &c2, &m}) {
      for (std::size_t j = 0; j < specs.size(); ++j) {
        double v = (*g)[j];
        bool ok = v >= specs[j].lower() && v <= specs[j].upper() && (!specs[j].is_integer() || v == std::floor(v));
        violations += !ok;
      }
    }
  }
  o.detail << "sort matches oracle on " << sort_ok << "/100 sets; SBX max |c1+c2-p1-p2| = " << worst
           << "; bound violations over 1e5 trials = " << violations;
  o.require(sort_ok == 100, "sort oracle");
  o.require(worst < 1e-12, "mean preservation");
  o.require(violations == 0, "bounds");
}

void demise_properties(Outcome& o) {
  auto base = load_materials(data_path("materials.csv"));
  auto records = base.records();
  MaterialRecord soft = base.lookup("Al-6061-T6");
  soft.name = "forcing";
  soft.h_f = 1.0;
  soft.t_m = 300.0;
  MaterialRecord hard = base.lookup("Titanium 6Al4V");
  hard.name = "unmeltable";
  hard.t_m = 1e9;
  records.push_back(soft);
  records.push_back(hard);
  MaterialDatabase db(records);
  auto atm = Atmosphere::load(data_path("atmosphere.csv"));

  auto tank_case = [&](const std::string& material) {
    auto cfg = config_from_ini(IniDocument::parse(
        "[parent]\nmass = 2000\nrho_bar = 100\nmaterial = Al-6061-T6\nthickness = 0.003\n"));
    auto n = sphere_tank(material, 0.0029);
    n.shape = SphereShape{0.42};
    cfg.components.push_back(n);
    return simulate_reentry(cfg, entry_state(), ReentryEvents{}, db, atm, DemiseOptions{}, true);
  };

  auto forcing = tank_case("forcing");
  auto unmeltable = tank_case("unmeltable");
  auto ti = tank_case("Titanium 6Al4V");
  auto al = tank_case("Al-6061-T6");
  double lmf_force = compute_lmf(forcing.fragments), lmf_hard = compute_lmf(unmeltable.fragments);
  auto frac = [](const ReentryResult& r) { return r.fragments.front().final_mass / r.fragments.front().initial_mass; };

  auto sc = load_scenario(scenario_path("leo_spacecraft.ini"));
  auto real = realize(sc.config, sc, sc.genes);
  auto leo = simulate_reentry(real.config, sc.mission.entry, sc.mission.events, sc.materials, sc.atmosphere,
                              sc.demise, true);

  std::size_t trajectories = 0, increases = 0;
  for (const auto* r : {&forcing, &unmeltable, &ti, &al, &leo}) {
    for (const auto& f : r->fragments) {
      ++trajectories;
      for (std::size_t i = 1; i < f.mass_history.size(); ++i) increases += f.mass_history[i] > f.mass_history[i - 1];
    }
  }
  o.detail << trajectories << " trajectories, " << increases << " mass increases; LMF(forcing) = " << lmf_force
           << ", LMF(T_m = 1e9 K) = " << lmf_hard << "; final-mass fraction Ti " << frac(ti) << " vs Al "
           << frac(al);
  o.require(increases == 0, "mass non-increasing");
  o.require(lmf_force == 1.0, "forcing LMF = 1");
  o.require(lmf_hard == 0.0, "unmeltable LMF = 0");
  o.require(frac(ti) > frac(al), "Ti keeps more mass");
}

void survivability_properties(Outcome& o) {
  Rng rng(99);
  double poisson_err = 0, lin_err = 0;
  for (int i = 0; i < 100000; ++i) {
    double n = std::pow(10.0, rng.uniform(-12, 1));
    poisson_err = std::max(poisson_err, std::abs(poisson_probability(n) - (1 - std::exp(-n))));
    if (n <= 1e-3) lin_err = std::max(lin_err, std::abs(poisson_probability(n) - n));
  }

  auto sc = load_scenario(scenario_path("tank_assembly.ini"));
  auto pnp_at = [&](double t_tank, double t_panel) {
    auto cfg = apply_genome(sc.config, sc.genes, {2, t_tank, 0, 0});
    for (auto& p : cfg.panels) p.face_thickness = t_panel;
    auto real = realize(cfg, sc, sc.genes);
    return compute_pnp(analyse_components(real.config, sc.environment, sc.materials, sc.survivability));
  };
  int drops = 0;
  double prev = 0, first = pnp_at(0.0005, 0.003), last = pnp_at(0.005, 0.003);
  for (int i = 0; i <= 18; ++i) {
    double v = pnp_at(std::min(0.0005 + 0.00025 * i, 0.005), 0.003);
    drops += v < prev;
    prev = v;
  }
  prev = 0;
  for (int i = 0; i <= 22; ++i) {
    double v = pnp_at(0.003, 0.0005 + 0.00025 * i);
    drops += v < prev;
    prev = v;
  }
  double cited = compute_pnp({PenetrationResult{1, 0, 0.0022, 0.0022}});
  o.detail << "max |P - (1 - e^-N)| = " << poisson_err << "; max |P - N| (N <= 1e-3) = " << lin_err
           << "; PNP " << first << " at 0.5 mm to " << last
           << " at 5 mm tank wall, decreases over tank/panel sweeps = " << drops << "; compute_pnp([0.0022]) = " << cited;
  o.require(poisson_err <= 1e-12, "Poisson");
  o.require(lin_err <= 1e-6, "linearisation");
  o.require(drops == 0 && last > first, "monotone");
  o.require(std::abs(cited - 0.9978) < 1e-12, "0.9978");
}

void placement_repair(Outcome& o) {
  Rng rng(7);
  int repaired = 0, rejected = 0, overlaps_left = 0, moved = 0, not_minimal = 0, stayed_wrongly = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double side = rng.uniform(1.0, 2.5);
    double res = side / static_cast<double>(10 + rng.below(11));
    auto cfg = cube_parent(side);
    int count = 2 + static_cast<int>(rng.below(5));
    for (int i = 0; i < count; ++i) {
      ComponentNode n;
      n.id = 8 + i;
      n.name = "c" + std::to_string(n.id);
      double l = rng.uniform(0.1, 0.45) * side, w = rng.uniform(0.1, 0.45) * side, h = rng.uniform(0.1, 0.45) * side;
      n.shape = BoxShape{l, w, h};
      n.material = "Al-6061-T6";
      n.thermal_mass = 1;
      Vec3 half(l / 2, w / 2, h / 2);
      Vec3 lim = Vec3::Constant(side / 2) - half;
      if (i > 0 && rng.uniform() < 0.5) {
        Vec3 p = cfg.components[rng.below(cfg.components.size())].position;
        for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a] + rng.uniform(-0.1, 0.1) * side, -lim[a], lim[a]);
        n.position = p;
      } else {
        n.position = Vec3(rng.uniform(-lim[0], lim[0]), rng.uniform(-lim[1], lim[1]), rng.uniform(-lim[2], lim[2]));
      }
      cfg.components.push_back(n);
    }
    auto pairs = detect_overlaps(cfg);
    auto out = repair_positions(cfg, res);
    if (!out.config) {
      ++rejected;
      continue;
    }
    ++repaired;
    overlaps_left += !detect_overlaps(*out.config).empty();

    std::set<NodeRef> involved;
    for (const auto& [a, b] : pairs) involved.insert(a), involved.insert(b);
    OccupancyGrid grid(interior_box(cfg), res);
    for (const auto& c : cfg.components) {
      if (!involved.count({c.id, c.instance})) grid.insert(body_box(cfg, c));
    }
    for (const auto& ref : involved) {
      const auto& before = *cfg.find_component(ref.id);
      const auto& after = *out.config->find_component(ref.id);
      if (grid.is_free(body_box(cfg, before))) {
        stayed_wrongly += !after.position.isApprox(before.position);
      } else {
        ++moved;
        double best = std::numeric_limits<double>::infinity();
        const auto& d = grid.dims();
        ComponentNode trial_node = before;
        for (int i = 0; i < d[0]; ++i)
          for (int j = 0; j < d[1]; ++j)
            for (int k = 0; k < d[2]; ++k) {
              trial_node.position = grid.cell_centre(i, j, k);
              if (grid.is_free(body_box(cfg, trial_node))) {
                best = std::min(best, (trial_node.position - before.position).squaredNorm());
              }
            }
        double got = (after.position - before.position).squaredNorm();
        not_minimal += std::abs(got - best) > 1e-12 * std::max(1.0, best);
      }
      grid.insert(body_box(*out.config, after));
    }
  }
  o.detail << "1000 configurations: " << repaired << " repaired, " << rejected << " rejected; " << overlaps_left
           << " with overlaps left; " << moved << " moves, " << not_minimal << " not minimal, " << stayed_wrongly
           << " needless moves";
  o.require(overlaps_left == 0, "no overlaps after repair");
  o.require(not_minimal == 0 && stayed_wrongly == 0, "minimal displacement");
  o.require(repaired > 500, "most configurations repairable");
}

double tank_run_seconds = -1;

void determinism(Outcome& o) {
  auto root = fs::temp_directory_path() / "dfd_acceptance";
  fs::remove_all(root);
  auto run = [&](const std::string& name, int workers) {
    cli::Options opt;
    opt.scenario = scenario_path("tank_assembly.ini");
    opt.seed = 1;
    opt.workers = workers;
    opt.out_dir = (root / name).string();
    opt.quiet = true;
    std::ostringstream out, err;
    auto t0 = Clock::now();
    int code = cli::cmd_optimize(opt, out, err);
    double secs = seconds_since(t0);
    if (code != 0) throw std::runtime_error("optimize exited " + std::to_string(code) + ": " + err.str());
    return std::make_pair(text::read_file((root / name / "pareto.csv").string()), secs);
  };
  auto [a, ta] = run("w1_a", 1);
  auto [b, tb] = run("w1_b", 1);
  auto [c, tc] = run("w8", 8);
  tank_run_seconds = std::min({ta, tb, tc});
  std::size_t rows = std::count(a.begin(), a.end(), '\n') - 2;
  o.detail << "tank scenario seed 1: " << rows << " front rows; rerun " << (a == b ? "identical" : "DIFFERENT")
           << ", workers 8 " << (a == c ? "identical" : "DIFFERENT");
  o.require(a == b, "rerun identical");
  o.require(a == c, "workers 1 vs 8 identical");
}

void performance(Outcome& o) {
  if (tank_run_seconds < 0) {
    auto sc = load_scenario(scenario_path("tank_assembly.ini"));
    auto t0 = Clock::now();
    run_nsga2(sc, sc.ga);
    tank_run_seconds = seconds_since(t0);
  }
  o.detail << "tank scenario pop 80 x 60 generations: " << tank_run_seconds << " s";
  o.require(tank_run_seconds < 300, "under 5 minutes");
}

}  // namespace

int main() {
  std::cout << std::setprecision(6);
  criterion(1, "tank sizing reproduction", tank_sizing);
  criterion(2, "constraint screening", constraint_screening);
  criterion(3, "GA front equals the enumeration oracle", oracle_equivalence);
  criterion(4, "NSGA-II invariants", nsga_invariants);
  criterion(5, "demise properties", demise_properties);
  criterion(6, "survivability properties", survivability_properties);
  criterion(7, "placement repair", placement_repair);
  criterion(8, "determinism", determinism);
  criterion(9, "desk-scale performance", performance);
  std::cout << (failures == 0 ? "all 9 criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}

#include "dfd/evaluate.hpp"

#include "dfd/constraints.hpp"
#include "dfd/error.hpp"
#include "dfd/placement.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace {

std::string label(const ComponentNode& n) { return n.name + " (id " + std::to_string(n.id) + ")"; }

std::optional<std::pair<double, double>> radius_bounds(const std::vector<GeneSpec>& genes, int id) {
  for (const auto& g : genes) {
    if (g.component_id == id && g.variable == GeneVariable::Radius) return std::make_pair(g.lo, g.hi);
  }
  return std::nullopt;
}

}  // namespace

Realization realize(const SpacecraftConfig& applied, const Scenario& sc, const std::vector<GeneSpec>& genes) {
  Realization out;
  SpacecraftConfig cfg = applied;
  const auto& db = sc.materials;
  auto fail = [&](std::string reason, std::string detail) {
    out.audit.push_back(reason + ": " + detail);
    out.dead = Dead{std::move(reason), std::move(detail)};
    out.config = cfg;
    return out;
  };

  try {
    for (auto& n : cfg.components) {
      if (n.kind == ComponentKind::Tank) {
        if (!sc.mission.tank) throw ConfigError("tank '" + n.name + "' needs [mission] tank parameters");
        const auto& p = *sc.mission.tank;
        auto verdict = check_tank(n, p, db);
        auto shape = tank_shape_of(n);
        double r = tank_radius(tank_volume(p), n.quantity, shape, p.ar);
        double stress = tank_wall_stress(r, *n.wall_thickness, p.p, p.sf, shape);
        std::string line = label(n) + ": r = " + text::format_double(r) + " m, stress " +
                           text::format_double(stress / 1e6) + " MPa vs " +
                           text::format_double(db.lookup(n.material).ultimate_strength() / 1e6) + " MPa";
        if (is_rejected(verdict)) return fail("tank-strength", line);
        out.audit.push_back("tank " + line);
        if (shape == TankShape::Sphere) {
          n.shape = SphereShape{r};
        } else {
          n.shape = CylinderShape{2 * r * p.ar, r};
        }
      } else if (n.kind == ComponentKind::ReactionWheel) {
        if (!sc.mission.rw) throw ConfigError("wheel '" + n.name + "' needs [mission] wheel parameters");
        const auto& p = *sc.mission.rw;
        auto verdict = check_rw(n, p, db, radius_bounds(genes, n.id));
        if (auto* rej = std::get_if<Rejected>(&verdict)) {
          return fail(rej->reason, label(n) + ": r_min = " +
                                       text::format_double(rw_min_radius(p, db.lookup(n.material).rho_m)) + " m");
        }
        auto& cyl = std::get<CylinderShape>(n.shape);
        if (auto* rep = std::get_if<Repaired>(&verdict)) {
          out.audit.push_back("wheel " + label(n) + ": radius repaired " + text::format_double(cyl.r) + " -> " +
                              text::format_double(rep->value) + " m");
          cyl.r = rep->value;
        } else {
          out.audit.push_back("wheel " + label(n) + ": r = " + text::format_double(cyl.r) + " m feasible");
        }
        cyl.l = 2 * cyl.r * p.ar;
        n.wall_thickness = cyl.l / 2;
      } else if (n.kind == ComponentKind::BatteryCell) {
        if (!sc.mission.battery) throw ConfigError("cell '" + n.name + "' needs [mission] battery parameters");
        if (!n.catalogue_id) throw MissingData("cell '" + n.name + "' has no catalogue id");
        const auto& cell = sc.cells.lookup(*n.catalogue_id);
        const BatteryChemistry* chem = nullptr;
        try {
          chem = &chemistry_for_casing(sc.chemistries, n.material);
        } catch (const NotFound& e) {
          return fail("battery", e.what());
        }
        auto sizing = size_battery(*sc.mission.battery, *chem, cell);
        n.quantity = sizing.n_cells;
        n.thermal_mass = cell.mass;
        if (cell.shape == CellShape::Box) {
          n.shape = BoxShape{cell.l, cell.w, cell.h};
        } else {
          n.shape = CylinderShape{cell.l, cell.diameter / 2};
        }
        out.audit.push_back("battery " + label(n) + ": " + chem->name + ", " +
                            text::format_double(sizing.capacity_wh) + " Wh, " +
                            text::format_double(sizing.mass_kg) + " kg, " + std::to_string(sizing.n_cells) +
                            " cells of type " + std::to_string(cell.cell_id));
      }
    }
  } catch (const Error& e) {
    return fail("config", e.what());
  }

  cfg = expand_instances(cfg);
  auto placed = repair_positions(cfg, sc.grid_resolution);
  if (!placed.config) return fail("placement", placed.detail);
  cfg = std::move(*placed.config);
  for (const auto& m : placed.moved) {
    out.audit.push_back("placement: moved component " + std::to_string(m.id) + "#" + std::to_string(m.instance));
  }
  try {
    validate_config(cfg, db);
  } catch (const Error& e) {
    return fail("config", e.what());
  }
  out.config = std::move(cfg);
  return out;
}

Evaluation evaluate_config(const SpacecraftConfig& applied, const Scenario& sc, const std::vector<GeneSpec>& genes) {
  Evaluation ev;
  ev.realization = realize(applied, sc, genes);
  if (ev.realization.dead) {
    ev.verdict = *ev.realization.dead;
    return ev;
  }
  const auto& cfg = ev.realization.config;

  Fitness fit;
  try {
    ev.reentry = simulate_reentry(cfg, sc.mission.entry, sc.mission.events, sc.materials, sc.atmosphere, sc.demise);
    fit.lmf = compute_lmf(ev.reentry->fragments);
  } catch (const Error& e) {
    ev.verdict = Dead{"demise", e.what()};
    return ev;
  }

  try {
    ev.penetration = analyse_components(cfg, sc.environment, sc.materials, sc.survivability);
    fit.pnp = compute_pnp(ev.penetration, sc.survivability.product_pnp, &ev.pnp_clamped);
  } catch (const MissingMaterialData& e) {
    ev.verdict = Dead{"ble-material", e.what()};
    return ev;
  } catch (const Error& e) {
    ev.verdict = Dead{"survivability", e.what()};
    return ev;
  }
  ev.verdict = fit;
  return ev;
}

Verdict evaluate(const Genome& genome, const Scenario& sc) {
  SpacecraftConfig applied;
  try {
    applied = apply_genome(sc.config, sc.genes, genome);
  } catch (const Error& e) {
    return Dead{"decode", e.what()};
  }
  return evaluate_config(applied, sc, sc.genes).verdict;
}

}  // namespace dfd

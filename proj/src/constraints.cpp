#include "dfd/constraints.hpp"

#include <cmath>
#include <numbers>

#include "dfd/error.hpp"

namespace dfd {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw InvariantError(what);
}
}  // namespace

void validate(const TankDesignParams& p) {
  require(p.m_f > 0, "tank: m_f must be > 0");
  require(p.rho_f > 0, "tank: rho_f must be > 0");
  require(p.p > 0, "tank: p must be > 0");
  require(p.sf >= 1, "tank: sf must be >= 1");
  require(p.k1 >= 1, "tank: k1 must be >= 1");
  require(p.ar > 0, "tank: ar must be > 0");
}

void validate(const RwDesignParams& p) {
  require(p.h_d > 0, "reaction wheel: h_d must be > 0");
  require(p.omega_max > 0, "reaction wheel: omega_max must be > 0");
  require(p.sf > 0, "reaction wheel: sf must be > 0");
  require(p.ar > 0, "reaction wheel: ar must be > 0");
}

void validate(const BatteryDesignParams& p) {
  require(p.w_e > 0, "battery: w_e must be > 0");
  require(p.t_e > 0, "battery: t_e must be > 0");
  require(p.eta > 0 && p.eta <= 1, "battery: eta must lie in (0, 1]");
  require(p.n_b >= 1, "battery: n_b must be >= 1");
}

double rpm_to_rad_per_s(double rpm) { return rpm * 2.0 * kPi / 60.0; }

double tank_volume(const TankDesignParams& params) {
  validate(params);
  return params.k1 * params.m_f / params.rho_f;
}

double tank_radius(double v_t, int n_t, TankShape shape, double ar) {
  if (!(v_t > 0) || n_t < 1) throw DomainError("tank_radius needs v_t > 0 and n_t >= 1");
  if (shape == TankShape::Sphere) return std::cbrt(3.0 * v_t / (4.0 * kPi * n_t));
  if (!(ar > 0)) throw DomainError("tank_radius needs ar > 0 for cylinders");
  return std::cbrt(v_t / (2.0 * kPi * ar * n_t));
}

double tank_wall_stress(double r_i, double t_s, double p, double sf, TankShape shape) {
  if (!(t_s > 0)) throw DomainError("tank wall thickness must be > 0");
  double hoop = sf * p * r_i / t_s;
  return shape == TankShape::Sphere ? hoop / 2.0 : hoop;
}

TankShape tank_shape_of(const ComponentNode& node) {
  if (std::holds_alternative<SphereShape>(node.shape)) return TankShape::Sphere;
  if (std::holds_alternative<CylinderShape>(node.shape)) return TankShape::Cylinder;
  throw DomainError("tank '" + node.name + "' must be a sphere or a cylinder");
}

FeasibilityVerdict check_tank(const ComponentNode& tank, const TankDesignParams& params,
                              const MaterialDatabase& db) {
  if (!tank.wall_thickness) throw MissingData("tank '" + tank.name + "' has no wall thickness");
  auto shape = tank_shape_of(tank);
  double r = tank_radius(tank_volume(params), tank.quantity, shape, params.ar);
  double stress = tank_wall_stress(r, *tank.wall_thickness, params.p, params.sf, shape);
  const auto& m = db.lookup(tank.material);
  if (stress < m.ultimate_strength()) return Feasible{};
  return Rejected{"tank-strength"};
}

double rw_min_radius(const RwDesignParams& params, double rho_m) {
  validate(params);
  if (!(rho_m > 0)) throw DomainError("wheel density must be > 0");
  return std::pow(params.h_d / (kPi * rho_m * params.omega_max * params.ar), 0.2);
}

double rw_rim_stress(const RwDesignParams& params, const MaterialRecord& m, double r) {
  return params.sf * (3.0 + m.poisson_ratio()) * m.rho_m * params.omega_max * params.omega_max * r * r;
}

FeasibilityVerdict check_rw(const ComponentNode& wheel, const RwDesignParams& params,
                            const MaterialDatabase& db,
                            std::optional<std::pair<double, double>> radius_bounds) {
  const auto* cyl = std::get_if<CylinderShape>(&wheel.shape);
  if (!cyl) throw DomainError("reaction wheel '" + wheel.name + "' must be a cylinder");
  const auto& m = db.lookup(wheel.material);

  double r = cyl->r;
  double r_min = rw_min_radius(params, m.rho_m);
  bool repaired = false;
  if (r < r_min) {
    if (radius_bounds && (r_min < radius_bounds->first || r_min > radius_bounds->second)) {
      return Rejected{"rw-bounds"};
    }
    r = r_min;
    repaired = true;
  }
  if (rw_rim_stress(params, m, r) > m.sigma_y) return Rejected{"rw-integrity"};
  if (repaired) return Repaired{r};
  return Feasible{};
}

BatterySizing size_battery(const BatteryDesignParams& params, const BatteryChemistry& chem,
                           const BatteryCellRecord& cell) {
  validate(params);
  if (!(chem.energy_density > 0) || !(chem.dod > 0 && chem.dod <= 1)) {
    throw InvariantError("battery chemistry '" + chem.name + "' has invalid energy density or DOD");
  }
  BatterySizing out;
  out.capacity_wh = params.w_e * params.t_e / (params.eta * params.n_b * chem.dod);
  out.mass_kg = out.capacity_wh / chem.energy_density * params.n_b;
  double ratio = out.mass_kg / cell.mass;
  // Absorb representation error so an exact multiple does not round up.
  out.n_cells = static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)));
  return out;
}

}  // namespace dfd

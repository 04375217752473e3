#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "dfd/config.hpp"
#include "dfd/materials.hpp"

namespace dfd {

struct TankDesignParams {
  double m_f = 0.0;    // propellant mass, kg
  double rho_f = 0.0;  // propellant density, kg/m^3
  double p = 0.0;      // storage pressure, Pa
  double sf = 1.0;     // safety factor
  double k1 = 1.0;     // filling factor
  double ar = 1.0;     // cylinder length / diameter
};

struct RwDesignParams {
  double h_d = 0.0;        // design angular momentum, N m s
  double omega_max = 0.0;  // rad/s
  double sf = 1.0;
  double ar = 0.0;         // wheel length / diameter
};

struct BatteryDesignParams {
  double w_e = 0.0;  // eclipse power, W
  double t_e = 0.0;  // eclipse time, h
  double eta = 0.9;  // transmission efficiency
  int n_b = 1;       // number of batteries
};

void validate(const TankDesignParams& p);
void validate(const RwDesignParams& p);
void validate(const BatteryDesignParams& p);

double rpm_to_rad_per_s(double rpm);

struct Feasible {
  bool operator==(const Feasible&) const = default;
};
struct Repaired {
  double value = 0.0;
  bool operator==(const Repaired&) const = default;
};
/// Reason codes: "tank-strength", "rw-bounds", "rw-integrity", ...
struct Rejected {
  std::string reason;
  bool operator==(const Rejected&) const = default;
};
using FeasibilityVerdict = std::variant<Feasible, Repaired, Rejected>;

inline bool is_rejected(const FeasibilityVerdict& v) { return std::holds_alternative<Rejected>(v); }

enum class TankShape { Sphere, Cylinder };

/// Propellant plus pressurant volume, k1 * m_f / rho_f.
double tank_volume(const TankDesignParams& params);

/// Internal radius of each of `n_t` tanks sharing volume `v_t`.
double tank_radius(double v_t, int n_t, TankShape shape, double ar = 1.0);

/// Safety-factored membrane stress in the wall: SF p r / (2 t) for spheres,
/// SF p r / t for cylinders.
double tank_wall_stress(double r_i, double t_s, double p, double sf, TankShape shape);

/// Tank shape from a node's shape (sphere or cylinder only).
TankShape tank_shape_of(const ComponentNode& node);

/// Feasible iff the wall stress is strictly below the material's ultimate
/// strength; the radius comes from the design parameters, the node's count
/// and its shape.
FeasibilityVerdict check_tank(const ComponentNode& tank, const TankDesignParams& params,
                              const MaterialDatabase& db);

/// Smallest wheel radius delivering the design momentum.
double rw_min_radius(const RwDesignParams& params, double rho_m);

/// Safety-factored rim stress SF (3 + nu) rho omega^2 r^2.
double rw_rim_stress(const RwDesignParams& params, const MaterialRecord& m, double r);

/// Radius repair then structural check. `radius_bounds` are the gene bounds
/// when the radius is optimised.
FeasibilityVerdict check_rw(const ComponentNode& wheel, const RwDesignParams& params,
                            const MaterialDatabase& db,
                            std::optional<std::pair<double, double>> radius_bounds = std::nullopt);

struct BatterySizing {
  double capacity_wh = 0.0;
  double mass_kg = 0.0;
  int n_cells = 0;
};

BatterySizing size_battery(const BatteryDesignParams& params, const BatteryChemistry& chem,
                           const BatteryCellRecord& cell);

}  // namespace dfd

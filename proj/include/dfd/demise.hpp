#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfd/atmosphere.hpp"
#include "dfd/config.hpp"
#include "dfd/materials.hpp"

namespace dfd {

constexpr double kEarthRadius = 6371000.0;     // m
constexpr double kEarthMu = 3.986004418e14;    // m^3/s^2
constexpr double kStefanBoltzmann = 5.670374419e-8;
constexpr double kHeatFluxCoefficient = 1.7415e-4;  // SI stagnation-point constant

/// Point-mass state over a spherical, non-rotating Earth. Angles in radians;
/// heading is measured from east towards north.
struct TrajectoryState {
  double altitude = 0.0;
  double velocity = 0.0;
  double flight_path_angle = 0.0;
  double longitude = 0.0;
  double latitude = 0.0;
  double heading = 0.0;
  double time = 0.0;
};

struct ThermalState {
  double temperature = 300.0;      // K
  double remaining_mass = 0.0;     // kg
  double absorbed_heat = 0.0;      // J, net of radiation
};

struct ReentryEvents {
  double breakup_altitude = 78000.0;
  /// Overrides every solar array's own detach altitude when set.
  std::optional<double> solar_detach_altitude;
  bool panel_detach = true;
};

/// Tumbling-averaged constants per shape.
struct ShapeCoefficients {
  double sphere = 0.0, cylinder = 0.0, box = 0.0, flat_plate = 0.0;
  double operator()(ShapeKind k) const;
};

struct DemiseOptions {
  double dt = 0.1;
  ShapeCoefficients drag{0.92, 0.80, 1.05, 1.10};
  ShapeCoefficients heating{1.0, 0.9, 0.85, 0.8};
  double min_nose_radius = 0.01;
  double max_flight_time = 1.0e5;  // s
  /// Propagate detached external panels to the ground; they never enter the LMF.
  bool track_panel_fragments = true;
};

/// Fixed-step RK4 of the drag-only 3-DOF equations.
TrajectoryState propagate_step(const TrajectoryState& s, double ballistic_coeff, double dt,
                               const Atmosphere& atm);

/// Stagnation heat flux C_q sqrt(rho / R_n) V^3, W/m^2.
double heat_flux(double rho, double velocity, double nose_radius);
double heat_flux(const TrajectoryState& s, double nose_radius, const Atmosphere& atm);

/// Sphere and cylinder: r; box: half the smallest side; flat plate: half the
/// thickness, never below `min_radius`.
double nose_radius(const Shape& shape, double thickness, double min_radius = 0.01);

/// Lumped-mass heating and melting over one step. `q_conv` is the absorbed
/// convective power in W; radiation leaves through `area`.
ThermalState thermal_update(const ThermalState& t, double q_conv, const MaterialRecord& m,
                            double area, double dt);

struct FragmentResult {
  int id = 0;
  int instance = 0;
  std::string name;
  bool internal = true;        // external panels are false
  int count = 1;               // identical copies represented
  double initial_mass = 0.0;   // thermal mass per copy, kg
  double final_mass = 0.0;
  bool demised = false;
  double release_altitude = 0.0;
  std::optional<double> demise_altitude;
  std::optional<double> landing_longitude;
  std::optional<double> landing_latitude;
  std::optional<double> impact_energy;
  double incident_heat = 0.0;  // J absorbed from convection
  double absorbed_heat = 0.0;  // J net of radiation
  std::vector<double> mass_history;  // thermal mass at every step
};

struct ReentryResult {
  std::vector<FragmentResult> fragments;  // sorted by (internal first, id, instance)
  TrajectoryState breakup_state;
  std::vector<std::pair<int, double>> panel_detachments;  // (panel id, altitude)
};

/// Two-phase re-entry: the parent alone until breakup (solar arrays dropped
/// at their altitude, panels detached at their melting point releasing what
/// is attached to them), then every fragment on its own trajectory.
ReentryResult simulate_reentry(const SpacecraftConfig& config, const TrajectoryState& entry,
                               const ReentryEvents& events, const MaterialDatabase& db,
                               const Atmosphere& atm, const DemiseOptions& options = {},
                               bool record_history = false);

/// 1 - sum(m_fin) / sum(m_in).
double compute_lmf(std::span<const double> initial_masses, std::span<const double> final_masses);
/// Same over the internal fragments, weighted by their counts.
double compute_lmf(const std::vector<FragmentResult>& fragments);

}  // namespace dfd

#pragma once

#include <string>
#include <vector>

#include "dfd/config.hpp"
#include "dfd/materials.hpp"

namespace dfd {

/// Directional debris flux sample. Angles in radians; the arrival direction
/// is (cos el cos az, cos el sin az, sin el) in the body frame, pointing
/// towards where the particles come from (az = 0 is the RAM direction).
struct VectorFluxElement {
  double flux = 0.0;       // impacts / m^2 / year
  double diameter = 0.0;   // m
  double velocity = 0.0;   // m/s
  double azimuth = 0.0;
  double elevation = 0.0;

  Vec3 direction() const;
};

struct DebrisEnvironment {
  std::vector<VectorFluxElement> elements;
  double total_flux() const;
};

DebrisEnvironment parse_flux_table(const std::string& csv_content);
DebrisEnvironment load_flux_table(const std::string& path);
void write_flux_table(std::ostream& os, const DebrisEnvironment& env);

/// Eight azimuth sectors in the local horizontal plane, each diameter's flux
/// split evenly among them.
DebrisEnvironment isotropic_environment(const std::vector<double>& diameters,
                                        const std::vector<double>& flux_per_diameter, double velocity);

/// Twelve 30-degree azimuth sectors with the flux concentrated around
/// +/-45 degrees off the flight direction, none from the trailing half-plane
/// sectors (|az| >= 120 deg), and a velocity falling off with the angle from
/// RAM. A synthetic stand-in for a sun-synchronous LEO environment.
DebrisEnvironment front_loaded_environment(const std::vector<double>& diameters,
                                           const std::vector<double>& flux_per_diameter);

struct BleCoefficients {
  double k_craters = 5.24;
  double hb_exp = 0.25;
  double dens_exp = 0.5;
  double vel_exp = 2.0 / 3.0;
  double thick_exp = 18.0 / 19.0;
  double spall_factor = 1.8;
  double projectile_density = 2800.0;  // kg/m^3
};

/// Reference single-wall ballistic limit inverted for the projectile
/// diameter. Throws MissingMaterialData without hb / c_sound.
double critical_diameter(double thickness, const MaterialRecord& wall, double v_normal,
                         const BleCoefficients& ble);

/// One sheet of a layered wall.
struct Sheet {
  double thickness = 0.0;
  const MaterialRecord* material = nullptr;
};

/// Sheets a particle meets crossing a panel: one for a single wall, bumper and
/// rear wall for Whipple, two face sheets (the rear one credited with the
/// core's equivalent thickness AD / rho_face) for honeycomb.
std::vector<Sheet> panel_sheets(const PanelSpec& panel, const MaterialDatabase& db);

/// Smallest diameter that perforates every sheet in turn, the velocity being
/// multiplied by `attenuation` after each sheet.
double stack_critical_diameter(const std::vector<Sheet>& sheets, double v_normal, const BleCoefficients& ble,
                               double attenuation);

struct PenetrationResult {
  int target_id = 0;
  int instance = 0;
  double expected_penetrations = 0.0;
  double probability = 0.0;
};

/// 1 - exp(-N).
double poisson_probability(double expected);

struct SurvivabilitySettings {
  BleCoefficients ble;
  double attenuation = 0.5;
  double lifetime_years = 10.0;
  int occlusion_samples = 16;   // per side of the zone sampling grid
  bool product_pnp = false;     // 1 - prod(1 - P) instead of 1 - sum(P)
  /// When false, a wall material without BLE data makes the analysis throw
  /// MissingMaterialData; when true such a sheet is treated as transparent.
  bool transparent_missing_ble = false;
};

/// Direct impacts on one external panel.
PenetrationResult panel_penetration_probability(const PanelSpec& panel, const DebrisEnvironment& env,
                                                const MaterialDatabase& db,
                                                const SurvivabilitySettings& settings);

struct VulnerableZone {
  double area = 0.0;        // m^2 on the panel plane
  double occlusion = 0.0;   // shadowed fraction in [0, 1]
};

/// Projection of the node's box along `direction` onto the panel plane,
/// clipped to the panel, with the fraction of it hidden behind other
/// top-level components.
VulnerableZone vulnerable_zone(const SpacecraftConfig& config, const ComponentNode& node, PanelRole panel,
                               const Vec3& direction, int samples = 16);

/// Debris-cloud impacts on an internal component through every panel facing
/// each flux element.
PenetrationResult component_penetration_probability(const ComponentNode& node, const SpacecraftConfig& config,
                                                    const DebrisEnvironment& env, const MaterialDatabase& db,
                                                    const SurvivabilitySettings& settings);

/// 1 - sum(P), clamped to [0, 1]; `clamped` reports whether clamping fired.
double compute_pnp(const std::vector<PenetrationResult>& results, bool product_form = false,
                   bool* clamped = nullptr);

/// Penetration results of every top-level internal component.
std::vector<PenetrationResult> analyse_components(const SpacecraftConfig& config, const DebrisEnvironment& env,
                                                  const MaterialDatabase& db,
                                                  const SurvivabilitySettings& settings);

}  // namespace dfd

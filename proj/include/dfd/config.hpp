#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfd/geometry.hpp"
#include "dfd/materials.hpp"

namespace dfd {

class IniDocument;

/// Role a component plays in the constraint pipeline.
enum class ComponentKind { Generic, Tank, ReactionWheel, BatteryBox, BatteryCell };

std::string to_string(ComponentKind k);
ComponentKind parse_component_kind(const std::string& s);

constexpr int kParentId = 0;

/// One object of the hierarchical configuration.
///
/// `parent_id` is 0 for free-floating components (3D position in the body
/// frame), a panel id 2..7 for components attached to an external panel
/// (2D position in the panel frame, stored in position.x/y), or the id of a
/// containing component. A component id in 2..7 shadows the panel with the
/// same id when resolving parents.
struct ComponentNode {
  int id = 0;
  int instance = 0;  // >0 for the extra copies produced by quantity expansion
  std::string name;
  int parent_id = kParentId;
  ComponentKind kind = ComponentKind::Generic;
  Shape shape = BoxShape{};
  std::string material;
  std::optional<double> thermal_mass;    // kg
  std::optional<double> wall_thickness;  // m
  double t_init = 300.0;                 // K
  std::optional<double> aero_mass;       // kg
  int quantity = 1;
  Vec3 position = Vec3::Zero();
  Orientation orientation;
  std::optional<int> catalogue_id;       // battery cells

  bool operator==(const ComponentNode&) const = default;
};

enum class WallType { SingleWall, HoneycombSandwich, Whipple };
std::string to_string(WallType w);
WallType parse_wall_type(const std::string& s);

struct PanelSpec {
  int id = 2;
  PanelRole role = PanelRole::Ram;
  WallType wall_type = WallType::SingleWall;
  double face_thickness = 0.0;    // m
  double hc_thickness = 0.0;      // m, honeycomb only
  double hc_areal_density = 0.0;  // kg/m^2, honeycomb only
  std::string material;
  double l = 0.0;  // size along the panel u axis, m
  double w = 0.0;  // size along the panel v axis, m
  double t_init = 300.0;

  double area() const { return l * w; }
  bool operator==(const PanelSpec&) const = default;
};

struct SolarArray {
  std::string name = "solar";
  double l = 0.0;
  double w = 0.0;
  double mass = 0.0;
  std::string material;
  double detach_altitude = 95000.0;  // m
  bool operator==(const SolarArray&) const = default;
};

/// Parent box, solar arrays, six external panels and the internal components.
struct SpacecraftConfig {
  ComponentNode parent;  // Box, aero_mass = total spacecraft mass
  std::vector<SolarArray> solar_panels;
  std::vector<PanelSpec> panels;
  std::vector<ComponentNode> components;

  Vec3 parent_dims() const;
  double parent_mass() const { return parent.aero_mass.value_or(0.0); }

  const PanelSpec& panel(PanelRole r) const;
  PanelSpec& panel(PanelRole r);
  /// First node (instance 0 preferred) with this id, or nullptr.
  const ComponentNode* find_component(int id) const;
  ComponentNode* find_component(int id);

  bool operator==(const SpacecraftConfig&) const = default;
};

/// Full structural validation; throws UnknownMaterial, BrokenHierarchy or
/// InvariantError.
void validate_config(const SpacecraftConfig& config, const MaterialDatabase& db);

/// True when `node` hangs directly off the parent or an external panel.
bool is_top_level(const SpacecraftConfig& config, const ComponentNode& node);
/// Panel the node is attached to, if any.
std::optional<PanelRole> attached_panel(const SpacecraftConfig& config, const ComponentNode& node);
/// Hops from `node` to the parent structure (1 for free-floating).
int hierarchy_depth(const SpacecraftConfig& config, const ComponentNode& node);

/// Cube side for a spacecraft of mass m_s and mean density rho_bar.
double derive_side_length(double m_s, double rho_bar);

/// Ablating mass of one instance: the given thermal mass, else a shell of
/// wall_thickness over the surface (capped at the solid volume).
double component_mass(const ComponentNode& node, const MaterialDatabase& db);

/// Aerodynamic mass of one instance: given m_aero, else thermal mass plus
/// everything contained in it.
double aero_mass(const SpacecraftConfig& config, const ComponentNode& node,
                 const MaterialDatabase& db);

/// Thermal mass of an external panel (face sheets plus honeycomb core).
double panel_mass(const PanelSpec& panel, const MaterialDatabase& db);

/// Body-frame centre of a top-level node (attached nodes sit flush against
/// the inner face of their panel).
Vec3 body_position(const SpacecraftConfig& config, const ComponentNode& node);
/// Body-frame bounding box of a top-level node.
Box3 body_box(const SpacecraftConfig& config, const ComponentNode& node);
/// Interior of the parent structure.
Box3 interior_box(const SpacecraftConfig& config);

/// Reads [parent], [solar.*], [panel.*] and [component.*] sections.
/// When no [panel.*] section is present, six single-wall panels are derived
/// from the parent material and thickness.
SpacecraftConfig config_from_ini(const IniDocument& doc);
SpacecraftConfig load_config(const std::string& path, const MaterialDatabase& db);

/// Writes the sections config_from_ini reads back.
void config_to_ini(const SpacecraftConfig& config, IniDocument& doc);

}  // namespace dfd

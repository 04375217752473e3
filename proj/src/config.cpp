#include "dfd/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dfd/error.hpp"
#include "dfd/ini.hpp"
#include "dfd/text.hpp"

namespace dfd {

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Generic: return "generic";
    case ComponentKind::Tank: return "tank";
    case ComponentKind::ReactionWheel: return "reaction_wheel";
    case ComponentKind::BatteryBox: return "battery_box";
    case ComponentKind::BatteryCell: return "battery_cell";
  }
  return "?";
}

ComponentKind parse_component_kind(const std::string& s) {
  auto t = text::lower(text::trim(s));
  if (t == "generic" || t.empty()) return ComponentKind::Generic;
  if (t == "tank") return ComponentKind::Tank;
  if (t == "reaction_wheel" || t == "rw") return ComponentKind::ReactionWheel;
  if (t == "battery_box") return ComponentKind::BatteryBox;
  if (t == "battery_cell") return ComponentKind::BatteryCell;
  throw ParseError("unknown component kind '" + s + "'");
}

std::string to_string(WallType w) {
  switch (w) {
    case WallType::SingleWall: return "single";
    case WallType::HoneycombSandwich: return "honeycomb";
    case WallType::Whipple: return "whipple";
  }
  return "?";
}

WallType parse_wall_type(const std::string& s) {
  auto t = text::lower(text::trim(s));
  if (t == "single" || t == "fp" || t == "single_wall") return WallType::SingleWall;
  if (t == "honeycomb" || t == "hc-sp" || t == "hcsp") return WallType::HoneycombSandwich;
  if (t == "whipple") return WallType::Whipple;
  throw ParseError("unknown wall type '" + s + "'");
}

Vec3 SpacecraftConfig::parent_dims() const {
  const auto& b = std::get<BoxShape>(parent.shape);
  return {b.l, b.w, b.h};
}

const PanelSpec& SpacecraftConfig::panel(PanelRole r) const {
  for (const auto& p : panels) {
    if (p.role == r) return p;
  }
  throw BrokenHierarchy("no " + to_string(r) + " panel defined");
}

PanelSpec& SpacecraftConfig::panel(PanelRole r) {
  return const_cast<PanelSpec&>(std::as_const(*this).panel(r));
}

const ComponentNode* SpacecraftConfig::find_component(int id) const {
  const ComponentNode* hit = nullptr;
  for (const auto& c : components) {
    if (c.id == id && (!hit || c.instance < hit->instance)) hit = &c;
  }
  return hit;
}

ComponentNode* SpacecraftConfig::find_component(int id) {
  return const_cast<ComponentNode*>(std::as_const(*this).find_component(id));
}

namespace {

void require_material(const std::string& name, const std::string& owner, const MaterialDatabase& db) {
  if (!db.contains(name)) {
    throw UnknownMaterial(owner + " uses unknown material '" + name + "'");
  }
}

std::string node_label(const ComponentNode& n) {
  return "component " + std::to_string(n.id) + " (" + n.name + ")";
}

}  // namespace

std::optional<PanelRole> attached_panel(const SpacecraftConfig& config, const ComponentNode& node) {
  if (is_panel_id(node.parent_id) && !config.find_component(node.parent_id)) {
    return role_from_panel_id(node.parent_id);
  }
  return std::nullopt;
}

bool is_top_level(const SpacecraftConfig& config, const ComponentNode& node) {
  return node.parent_id == kParentId || attached_panel(config, node).has_value();
}

int hierarchy_depth(const SpacecraftConfig& config, const ComponentNode& node) {
  int depth = 0;
  const ComponentNode* cur = &node;
  while (true) {
    ++depth;
    if (depth > 8) throw BrokenHierarchy(node_label(node) + ": parent chain does not terminate");
    if (cur->parent_id == kParentId) return depth;
    if (attached_panel(config, *cur)) return depth + 1;
    const ComponentNode* next = config.find_component(cur->parent_id);
    if (!next) {
      throw BrokenHierarchy(node_label(*cur) + ": parent id " + std::to_string(cur->parent_id) +
                            " does not exist");
    }
    if (next->id == cur->id) throw BrokenHierarchy(node_label(*cur) + " is its own parent");
    cur = next;
  }
}

void validate_config(const SpacecraftConfig& config, const MaterialDatabase& db) {
  const auto& parent = config.parent;
  if (parent.id != kParentId) throw BrokenHierarchy("parent structure must have id 0");
  if (!std::holds_alternative<BoxShape>(parent.shape)) throw InvariantError("parent structure must be a box");
  validate(parent.shape);
  require_material(parent.material, "parent structure", db);
  if (!(config.parent_mass() > 0)) throw InvariantError("parent mass must be > 0");

  for (const auto& s : config.solar_panels) {
    if (!(s.l > 0 && s.w > 0)) throw InvariantError("solar array '" + s.name + "' needs l, w > 0");
    if (s.mass < 0) throw InvariantError("solar array '" + s.name + "' mass must be >= 0");
    require_material(s.material, "solar array '" + s.name + "'", db);
  }

  std::set<PanelRole> roles;
  for (const auto& p : config.panels) {
    std::string label = to_string(p.role) + " panel";
    if (!roles.insert(p.role).second) throw BrokenHierarchy(label + " defined twice");
    if (p.id != panel_id(p.role)) throw BrokenHierarchy(label + " must have id " + std::to_string(panel_id(p.role)));
    if (!(p.face_thickness > 0)) throw InvariantError(label + ": thickness must be > 0");
    if (!(p.t_init > 0)) throw InvariantError(label + ": t_init must be > 0");
    require_material(p.material, label, db);
    bool hc = p.wall_type == WallType::HoneycombSandwich;
    if (hc && !(p.hc_thickness > 0 && p.hc_areal_density > 0)) {
      throw InvariantError(label + ": honeycomb needs hc_thickness > 0 and hc_areal_density > 0");
    }
    if (!hc && (p.hc_thickness != 0 || p.hc_areal_density != 0)) {
      throw InvariantError(label + ": hc_thickness/hc_areal_density only apply to honeycomb panels");
    }
  }
  for (auto r : kAllPanelRoles) {
    if (!roles.count(r)) throw BrokenHierarchy("configuration is missing the " + to_string(r) + " panel");
  }

  std::set<std::pair<int, int>> keys;
  for (const auto& c : config.components) {
    if (c.id == kParentId) throw BrokenHierarchy(node_label(c) + ": id 0 is reserved for the parent");
    if (!keys.insert({c.id, c.instance}).second) throw BrokenHierarchy(node_label(c) + ": duplicate id");
    if (c.parent_id == c.id) throw BrokenHierarchy(node_label(c) + " is its own parent");
    validate(c.shape);
    require_material(c.material, node_label(c), db);
    if (c.quantity < 1) throw InvariantError(node_label(c) + ": quantity must be >= 1");
    if (c.wall_thickness && !(*c.wall_thickness > 0)) throw InvariantError(node_label(c) + ": thickness must be > 0");
    if (!(c.t_init > 0)) throw InvariantError(node_label(c) + ": t_init must be > 0");
    if (c.thermal_mass && !(*c.thermal_mass > 0)) throw InvariantError(node_label(c) + ": mass must be > 0");
    int depth = hierarchy_depth(config, c);
    if (depth > 3) {
      throw BrokenHierarchy(node_label(c) + ": nested " + std::to_string(depth) +
                            " levels deep, at most 3 allowed");
    }
  }
}

double derive_side_length(double m_s, double rho_bar) {
  if (!(m_s > 0) || !(rho_bar > 0)) throw DomainError("side length needs m_s > 0 and rho_bar > 0");
  return std::cbrt(m_s / rho_bar);
}

double component_mass(const ComponentNode& node, const MaterialDatabase& db) {
  if (node.thermal_mass) return *node.thermal_mass;
  if (!node.wall_thickness) {
    throw MissingData(node_label(node) + ": neither a mass nor a wall thickness is given");
  }
  const auto& m = db.lookup(node.material);
  double shell = surface_area(node.shape) * *node.wall_thickness;
  double solid = volume(node.shape);
  if (solid > 0) shell = std::min(shell, solid);
  return shell * m.rho_m;
}

double aero_mass(const SpacecraftConfig& config, const ComponentNode& node, const MaterialDatabase& db) {
  if (node.aero_mass && *node.aero_mass > 0) return *node.aero_mass;
  double total = component_mass(node, db);
  for (const auto& child : config.components) {
    if (child.parent_id == node.id && &child != &node && !attached_panel(config, child)) {
      total += aero_mass(config, child, db) * child.quantity;
    }
  }
  return total;
}

double panel_mass(const PanelSpec& p, const MaterialDatabase& db) {
  const auto& m = db.lookup(p.material);
  double sheet = p.area() * p.face_thickness * m.rho_m;
  switch (p.wall_type) {
    case WallType::SingleWall: return sheet;
    case WallType::Whipple: return 2 * sheet;
    case WallType::HoneycombSandwich: return 2 * sheet + p.hc_areal_density * p.area();
  }
  return sheet;
}

Vec3 body_position(const SpacecraftConfig& config, const ComponentNode& node) {
  if (auto role = attached_panel(config, node)) {
    auto f = panel_frame(*role, config.parent_dims());
    Vec3 half = half_extents(node.shape, node.orientation);
    return f.centre + f.u * node.position.x() + f.v * node.position.y() -
           f.normal * half[f.normal_axis];
  }
  return node.position;
}

Box3 body_box(const SpacecraftConfig& config, const ComponentNode& node) {
  Vec3 c = body_position(config, node);
  Vec3 half = half_extents(node.shape, node.orientation);
  return Box3(c - half, c + half);
}

Box3 interior_box(const SpacecraftConfig& config) {
  Vec3 half = config.parent_dims() / 2;
  return Box3(-half, half);
}

namespace {

Shape read_shape(const IniSection& s) {
  switch (parse_shape_kind(s.get("shape"))) {
    case ShapeKind::Box: return BoxShape{s.get_double("l"), s.get_double("w"), s.get_double("h")};
    case ShapeKind::Cylinder: return CylinderShape{s.get_double("l"), s.get_double("r")};
    case ShapeKind::Sphere: return SphereShape{s.get_double("r")};
    case ShapeKind::FlatPlate: return FlatPlateShape{s.get_double("l"), s.get_double("w")};
  }
  throw ParseError("[" + s.name() + "] bad shape");
}

void write_shape(const Shape& shape, IniSection& s) {
  s.set("shape", to_string(kind_of(shape)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto put = [&](const char* k, double v) { s.set(k, text::format_double(v)); };
        if constexpr (std::is_same_v<T, BoxShape>) {
          put("l", x.l); put("w", x.w); put("h", x.h);
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          put("l", x.l); put("r", x.r);
        } else if constexpr (std::is_same_v<T, SphereShape>) {
          put("r", x.r);
        } else {
          put("l", x.l); put("w", x.w);
        }
      },
      shape);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += text::format_double(v[i]);
  }
  return out;
}

PanelSpec read_panel(const IniSection& s, PanelRole role, const Vec3& dims) {
  PanelSpec p;
  p.role = role;
  p.id = panel_id(role);
  p.wall_type = parse_wall_type(s.find("wall").value_or("single"));
  p.face_thickness = s.get_double("thickness");
  p.material = s.get("material");
  p.hc_thickness = s.get_double_or("hc_thickness", 0.0);
  p.hc_areal_density = s.get_double_or("hc_areal_density", 0.0);
  p.t_init = s.get_double_or("t_init", 300.0);
  auto f = panel_frame(role, dims);
  p.l = s.get_double_or("l", f.size_u);
  p.w = s.get_double_or("w", f.size_v);
  return p;
}

}  // namespace

SpacecraftConfig config_from_ini(const IniDocument& doc) {
  SpacecraftConfig cfg;
  const auto& ps = doc.get("parent");
  auto& parent = cfg.parent;
  parent.id = kParentId;
  parent.name = ps.find("name").value_or("Parent");
  parent.material = ps.get("material");
  parent.wall_thickness = ps.get_double("thickness");
  parent.t_init = ps.get_double_or("t_init", 300.0);
  parent.aero_mass = ps.get_double("mass");
  if (ps.has("rho_bar")) {
    double side = derive_side_length(*parent.aero_mass, ps.get_double("rho_bar"));
    parent.shape = BoxShape{side, side, side};
  } else {
    parent.shape = BoxShape{ps.get_double("l"), ps.get_double("w"), ps.get_double("h")};
  }
  Vec3 dims = cfg.parent_dims();

  for (const auto* s : doc.with_prefix("solar")) {
    SolarArray a;
    a.name = s->suffix();
    a.l = s->get_double("l");
    a.w = s->get_double("w");
    a.mass = s->get_double_or("mass", 0.0);
    a.material = s->find("material").value_or(parent.material);
    a.detach_altitude = s->get_double_or("detach_alt", 95000.0);
    cfg.solar_panels.push_back(a);
  }

  auto panel_sections = doc.with_prefix("panel");
  if (panel_sections.empty()) {
    for (auto r : kAllPanelRoles) {
      PanelSpec p;
      p.role = r;
      p.id = panel_id(r);
      p.face_thickness = *parent.wall_thickness;
      p.material = parent.material;
      p.t_init = parent.t_init;
      auto f = panel_frame(r, dims);
      p.l = f.size_u;
      p.w = f.size_v;
      cfg.panels.push_back(p);
    }
  } else {
    for (const auto* s : panel_sections) {
      cfg.panels.push_back(read_panel(*s, parse_panel_role(s->suffix()), dims));
    }
  }

  std::set<int> three_d;
  for (const auto* s : doc.with_prefix("component")) {
    ComponentNode c;
    c.id = static_cast<int>(s->get_long("id"));
    c.name = s->find("name").value_or(s->suffix());
    c.kind = parse_component_kind(s->find("kind").value_or("generic"));
    c.parent_id = static_cast<int>(s->get_long_or("parent", kParentId));
    c.shape = read_shape(*s);
    c.material = s->get("material");
    c.thermal_mass = s->find_double("mass");
    c.aero_mass = s->find_double("aero_mass");
    c.wall_thickness = s->find_double("thickness");
    c.t_init = s->get_double_or("t_init", 300.0);
    c.quantity = static_cast<int>(s->get_long_or("quantity", 1));
    if (s->has("orientation")) c.orientation = parse_orientation(s->get("orientation"));
    if (s->has("cell")) c.catalogue_id = static_cast<int>(s->get_long("cell"));
    if (s->has("position")) {
      auto v = s->get_doubles("position");
      if (v.size() != 2 && v.size() != 3) {
        throw ParseError("[" + s->name() + "] position needs 2 (panel frame) or 3 (body frame) values");
      }
      if (c.parent_id == kParentId && v.size() != 3) {
        throw ParseError("[" + s->name() + "] free-floating components take a 3D body-frame position");
      }
      c.position = Vec3(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
      if (v.size() == 3 && is_panel_id(c.parent_id)) three_d.insert(c.id);
    }
    cfg.components.push_back(std::move(c));
  }
  for (const auto& c : cfg.components) {
    if (three_d.count(c.id) && attached_panel(cfg, c)) {
      throw ParseError("component " + std::to_string(c.id) + ": attached components take a 2D panel-frame position");
    }
  }
  return cfg;
}

SpacecraftConfig load_config(const std::string& path, const MaterialDatabase& db) {
  auto cfg = config_from_ini(IniDocument::load(path));
  validate_config(cfg, db);
  return cfg;
}

void config_to_ini(const SpacecraftConfig& cfg, IniDocument& doc) {
  auto fmt = [](double v) { return text::format_double(v); };
  {
    IniSection s("parent", {});
    const auto& b = std::get<BoxShape>(cfg.parent.shape);
    s.set("name", cfg.parent.name);
    s.set("mass", fmt(cfg.parent_mass()));
    s.set("l", fmt(b.l));
    s.set("w", fmt(b.w));
    s.set("h", fmt(b.h));
    s.set("material", cfg.parent.material);
    s.set("thickness", fmt(cfg.parent.wall_thickness.value_or(0.0)));
    s.set("t_init", fmt(cfg.parent.t_init));
    doc.add(std::move(s));
  }
  for (const auto& a : cfg.solar_panels) {
    IniSection s("solar." + a.name, {});
    s.set("l", fmt(a.l));
    s.set("w", fmt(a.w));
    s.set("mass", fmt(a.mass));
    s.set("material", a.material);
    s.set("detach_alt", fmt(a.detach_altitude));
    doc.add(std::move(s));
  }
  for (const auto& p : cfg.panels) {
    IniSection s("panel." + to_string(p.role), {});
    s.set("wall", to_string(p.wall_type));
    s.set("material", p.material);
    s.set("thickness", fmt(p.face_thickness));
    if (p.wall_type == WallType::HoneycombSandwich) {
      s.set("hc_thickness", fmt(p.hc_thickness));
      s.set("hc_areal_density", fmt(p.hc_areal_density));
    }
    s.set("l", fmt(p.l));
    s.set("w", fmt(p.w));
    s.set("t_init", fmt(p.t_init));
    doc.add(std::move(s));
  }
  std::map<std::string, int> used;
  for (const auto& c : cfg.components) {
    std::string key = text::lower(c.name);
    std::replace(key.begin(), key.end(), ' ', '_');
    if (c.instance > 0 || used[key]++ > 0) key += "_" + std::to_string(c.id) + "_" + std::to_string(c.instance);
    IniSection s("component." + key, {});
    s.set("id", std::to_string(c.id));
    s.set("name", c.name);
    s.set("kind", to_string(c.kind));
    s.set("parent", std::to_string(c.parent_id));
    write_shape(c.shape, s);
    s.set("material", c.material);
    if (c.thermal_mass) s.set("mass", fmt(*c.thermal_mass));
    if (c.aero_mass) s.set("aero_mass", fmt(*c.aero_mass));
    if (c.wall_thickness) s.set("thickness", fmt(*c.wall_thickness));
    s.set("t_init", fmt(c.t_init));
    s.set("quantity", std::to_string(c.quantity));
    if (c.parent_id == kParentId) {
      s.set("position", join({c.position.x(), c.position.y(), c.position.z()}));
    } else if (is_panel_id(c.parent_id)) {
      s.set("position", join({c.position.x(), c.position.y()}));
    }
    s.set("orientation", to_string(c.orientation, kind_of(c.shape)));
    if (c.catalogue_id) s.set("cell", std::to_string(*c.catalogue_id));
    doc.add(std::move(s));
  }
}

}  // namespace dfd

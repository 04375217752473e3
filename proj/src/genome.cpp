#include "dfd/genome.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dfd/error.hpp"
#include "dfd/ini.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace {

struct VariableName {
  GeneVariable v;
  const char* name;
};

constexpr VariableName kVariableNames[] = {
    {GeneVariable::Material, "material"}, {GeneVariable::Shape, "shape"},
    {GeneVariable::Thickness, "thickness"}, {GeneVariable::Quantity, "quantity"},
    {GeneVariable::Parent, "parent"},     {GeneVariable::PositionX, "x"},
    {GeneVariable::PositionY, "y"},       {GeneVariable::PositionZ, "z"},
    {GeneVariable::Radius, "r"},          {GeneVariable::Length, "l"},
    {GeneVariable::Width, "w"},           {GeneVariable::Height, "h"},
    {GeneVariable::Orientation, "orientation"}, {GeneVariable::Cell, "cell"},
    {GeneVariable::Wall, "wall"},
};

std::vector<std::string> split_options(const std::string& s) {
  auto parts = text::split(s, s.find('|') != std::string::npos ? '|' : ',');
  for (const auto& p : parts) {
    if (p.empty()) throw ParseError("empty option in '" + s + "'");
  }
  return parts;
}

}  // namespace

std::string to_string(GeneVariable v) {
  for (const auto& n : kVariableNames) {
    if (n.v == v) return n.name;
  }
  return "?";
}

GeneVariable parse_gene_variable(const std::string& s) {
  auto t = text::lower(text::trim(s));
  for (const auto& n : kVariableNames) {
    if (t == n.name) return n.v;
  }
  if (t == "radius") return GeneVariable::Radius;
  if (t == "length") return GeneVariable::Length;
  if (t == "width") return GeneVariable::Width;
  if (t == "height") return GeneVariable::Height;
  if (t == "n" || t == "count") return GeneVariable::Quantity;
  throw ParseError("unknown optimisation variable '" + s + "'");
}

bool is_integer_variable(GeneVariable v) {
  switch (v) {
    case GeneVariable::Material:
    case GeneVariable::Shape:
    case GeneVariable::Quantity:
    case GeneVariable::Parent:
    case GeneVariable::Orientation:
    case GeneVariable::Cell:
    case GeneVariable::Wall: return true;
    default: return false;
  }
}

std::vector<GeneSpec> gene_specs_from_ini(const IniDocument& doc) {
  std::vector<GeneSpec> out;
  for (const auto* s : doc.with_prefix("optimize")) {
    std::optional<int> id;
    std::optional<PanelRole> panel;
    if (s->has("id")) id = static_cast<int>(s->get_long("id"));
    if (s->has("panel")) panel = parse_panel_role(s->get("panel"));
    if (id.has_value() == panel.has_value()) {
      throw ParseError("[" + s->name() + "] needs exactly one of 'id' or 'panel'");
    }
    double hc_t = s->get_double_or("hc_thickness", 0.0);
    double hc_ad = s->get_double_or("hc_areal_density", 0.0);

    for (const auto& [key, value] : s->entries()) {
      auto dot = key.rfind('.');
      if (dot == std::string::npos) {
        if (key == "id" || key == "panel" || key == "hc_thickness" || key == "hc_areal_density") continue;
        throw ParseError("[" + s->name() + "] unknown key '" + key + "'");
      }
      GeneSpec g;
      g.component_id = id;
      g.panel = panel;
      g.variable = parse_gene_variable(key.substr(0, dot));
      g.label = s->suffix() + "." + to_string(g.variable);
      g.hc_thickness = hc_t;
      g.hc_areal_density = hc_ad;
      auto kind = key.substr(dot + 1);
      std::string where = "[" + s->name() + "] " + key;
      if (kind == "options") {
        g.options = split_options(value);
      } else if (kind == "range") {
        auto v = s->get_doubles(key);
        if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || v[1] < v[0]) {
          throw ParseError(where + " must be two integers lo, hi with lo <= hi");
        }
        for (long k = static_cast<long>(v[0]); k <= static_cast<long>(v[1]); ++k) g.options.push_back(std::to_string(k));
      } else if (kind == "bounds") {
        auto v = s->get_doubles(key);
        if (v.size() != 2 || !(v[0] < v[1])) throw ParseError(where + " must be lo, hi with lo < hi");
        g.lo = v[0];
        g.hi = v[1];
      } else {
        throw ParseError(where + ": expected .options, .range or .bounds");
      }
      if (is_integer_variable(g.variable) && !g.is_integer()) {
        throw ParseError(where + ": '" + to_string(g.variable) + "' takes options or a range");
      }
      if (!is_integer_variable(g.variable)) {
        for (const auto& o : g.options) text::to_double(o, where);
      }
      out.push_back(std::move(g));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (out[i].component_id == out[j].component_id && out[i].panel == out[j].panel &&
          out[i].variable == out[j].variable) {
        throw ParseError("optimisation variable '" + out[i].label + "' is defined twice");
      }
    }
  }
  return out;
}

void validate_gene_specs(const std::vector<GeneSpec>& specs, const SpacecraftConfig& config,
                         const MaterialDatabase& db) {
  for (const auto& g : specs) {
    auto fail = [&](const std::string& why) { throw ConfigError("gene '" + g.label + "': " + why); };
    if (g.panel) {
      switch (g.variable) {
        case GeneVariable::Material:
        case GeneVariable::Thickness:
        case GeneVariable::Wall: break;
        default: fail("panels only take material, thickness and wall genes");
      }
    } else {
      const auto* node = config.find_component(*g.component_id);
      if (!node) fail("no component with id " + std::to_string(*g.component_id));
      if (g.variable == GeneVariable::Wall) fail("wall genes apply to panels");
      if (g.variable == GeneVariable::Shape && node->kind != ComponentKind::Tank) fail("shape genes apply to tanks");
      if (g.variable == GeneVariable::Cell && node->kind != ComponentKind::BatteryCell) {
        fail("cell genes apply to battery cells");
      }
      auto kind = kind_of(node->shape);
      if (g.variable == GeneVariable::Radius && kind != ShapeKind::Cylinder && kind != ShapeKind::Sphere) {
        fail("radius genes need a cylinder or a sphere");
      }
      if ((g.variable == GeneVariable::Width || g.variable == GeneVariable::Height) && kind != ShapeKind::Box) {
        fail("width / height genes need a box");
      }
    }
    for (const auto& o : g.options) {
      try {
        switch (g.variable) {
          case GeneVariable::Material:
            if (!db.contains(o)) throw UnknownMaterial("unknown material '" + o + "'");
            break;
          case GeneVariable::Shape: {
            auto k = parse_shape_kind(o);
            if (k != ShapeKind::Sphere && k != ShapeKind::Cylinder) fail("tank shapes are sphere or cylinder");
            break;
          }
          case GeneVariable::Quantity:
            if (text::to_long(o, g.label) < 1) fail("quantities must be >= 1");
            break;
          case GeneVariable::Parent: {
            long p = text::to_long(o, g.label);
            if (p != kParentId && !is_panel_id(static_cast<int>(p)) && !config.find_component(static_cast<int>(p))) {
              fail("parent option " + o + " is neither the parent, a panel nor a component");
            }
            if (p == g.component_id) fail("a component cannot contain itself");
            break;
          }
          case GeneVariable::Orientation: parse_orientation(o); break;
          case GeneVariable::Cell: text::to_long(o, g.label); break;
          case GeneVariable::Wall: {
            if (parse_wall_type(o) == WallType::HoneycombSandwich &&
                !(g.hc_areal_density > 0 && g.hc_thickness > 0)) {
              const auto& p = config.panel(*g.panel);
              if (p.wall_type != WallType::HoneycombSandwich) {
                fail("switching to honeycomb needs hc_thickness and hc_areal_density");
              }
            }
            break;
          }
          default: break;
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    if (!is_integer_variable(g.variable)) {
      bool positive = g.variable != GeneVariable::PositionX && g.variable != GeneVariable::PositionY &&
                      g.variable != GeneVariable::PositionZ;
      if (positive && !g.is_integer() && !(g.lo > 0)) fail("bounds must be positive");
      for (const auto& o : g.options) {
        if (positive && !(text::to_double(o, g.label) > 0)) fail("options must be positive");
      }
    }
  }
}

void check_genome(const Genome& g, const std::vector<GeneSpec>& specs) {
  if (g.size() != specs.size()) {
    throw DecodeError("genome has " + std::to_string(g.size()) + " genes, expected " + std::to_string(specs.size()));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& s = specs[i];
    double v = g[i];
    bool ok = std::isfinite(v) && v >= s.lower() && v <= s.upper();
    if (s.is_integer()) ok = ok && v == std::floor(v);
    if (!ok) throw DecodeError("gene '" + s.label + "' value " + text::format_double(v) + " is out of its domain");
  }
}

std::string gene_value_string(const GeneSpec& spec, double value) {
  if (spec.is_integer()) return spec.options.at(static_cast<std::size_t>(value));
  return text::format_double(value);
}

namespace {

ComponentNode& node_for(SpacecraftConfig& cfg, int id) {
  auto* n = cfg.find_component(id);
  if (!n) throw DecodeError("no component with id " + std::to_string(id));
  return *n;
}

void set_radius(Shape& shape, double r) {
  if (auto* c = std::get_if<CylinderShape>(&shape)) c->r = r;
  if (auto* s = std::get_if<SphereShape>(&shape)) s->r = r;
}

void apply_gene(SpacecraftConfig& cfg, const GeneSpec& g, double gene) {
  const std::string opt = g.is_integer() ? g.options.at(static_cast<std::size_t>(gene)) : std::string();
  const double value = is_integer_variable(g.variable) || !g.is_integer() ? gene : text::to_double(opt, g.label);
  if (g.panel) {
    auto& p = cfg.panel(*g.panel);
    switch (g.variable) {
      case GeneVariable::Material: p.material = opt; break;
      case GeneVariable::Thickness: p.face_thickness = value; break;
      case GeneVariable::Wall: {
        auto w = parse_wall_type(opt);
        if (w == WallType::HoneycombSandwich && g.hc_areal_density > 0) {
          p.hc_thickness = g.hc_thickness;
          p.hc_areal_density = g.hc_areal_density;
        } else if (w != WallType::HoneycombSandwich) {
          p.hc_thickness = 0.0;
          p.hc_areal_density = 0.0;
        }
        p.wall_type = w;
        break;
      }
      default: throw DecodeError("gene '" + g.label + "' does not apply to panels");
    }
    return;
  }
  auto& n = node_for(cfg, *g.component_id);
  switch (g.variable) {
    case GeneVariable::Material: n.material = opt; break;
    case GeneVariable::Shape: {
      double r = 0;
      if (auto* c = std::get_if<CylinderShape>(&n.shape)) r = c->r;
      if (auto* s = std::get_if<SphereShape>(&n.shape)) r = s->r;
      if (parse_shape_kind(opt) == ShapeKind::Sphere) {
        n.shape = SphereShape{r};
      } else if (!std::holds_alternative<CylinderShape>(n.shape)) {
        n.shape = CylinderShape{2 * r, r};
      }
      break;
    }
    case GeneVariable::Thickness: n.wall_thickness = value; break;
    case GeneVariable::Quantity: n.quantity = static_cast<int>(text::to_long(opt, g.label)); break;
    case GeneVariable::Parent: n.parent_id = static_cast<int>(text::to_long(opt, g.label)); break;
    case GeneVariable::PositionX: n.position.x() = value; break;
    case GeneVariable::PositionY: n.position.y() = value; break;
    case GeneVariable::PositionZ: n.position.z() = value; break;
    case GeneVariable::Radius: set_radius(n.shape, value); break;
    case GeneVariable::Length:
      std::visit(
          [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (!std::is_same_v<T, SphereShape>) s.l = value;
          },
          n.shape);
      break;
    case GeneVariable::Width:
      if (auto* b = std::get_if<BoxShape>(&n.shape)) b->w = value;
      break;
    case GeneVariable::Height:
      if (auto* b = std::get_if<BoxShape>(&n.shape)) b->h = value;
      break;
    case GeneVariable::Orientation: n.orientation = parse_orientation(opt); break;
    case GeneVariable::Cell: n.catalogue_id = static_cast<int>(text::to_long(opt, g.label)); break;
    case GeneVariable::Wall: throw DecodeError("gene '" + g.label + "' applies to panels only");
  }
}

double nearest_option(const GeneSpec& g, const std::string& current,
                      bool (*same)(const std::string&, const std::string&)) {
  for (std::size_t i = 0; i < g.options.size(); ++i) {
    try {
      if (same(g.options[i], current)) return static_cast<double>(i);
    } catch (const Error&) {
    }
  }
  return 0.0;
}

}  // namespace

Genome genome_from_config(const SpacecraftConfig& config, const std::vector<GeneSpec>& specs) {
  Genome g;
  auto eq = [](const std::string& a, const std::string& b) { return a == b; };
  auto eq_long = [](const std::string& a, const std::string& b) {
    return text::to_long(a, "option") == text::to_long(b, "option");
  };
  for (const auto& s : specs) {
    double v = 0;
    if (s.panel) {
      const auto& p = config.panel(*s.panel);
      switch (s.variable) {
        case GeneVariable::Material: v = nearest_option(s, p.material, eq); break;
        case GeneVariable::Wall:
          v = nearest_option(s, to_string(p.wall_type),
                             [](const std::string& a, const std::string& b) {
                               return parse_wall_type(a) == parse_wall_type(b);
                             });
          break;
        default: v = p.face_thickness; break;
      }
    } else {
      const auto* n = config.find_component(*s.component_id);
      if (!n) throw DecodeError("no component with id " + std::to_string(*s.component_id));
      auto dims = half_extents(n->shape, Orientation{}) * 2;
      switch (s.variable) {
        case GeneVariable::Material: v = nearest_option(s, n->material, eq); break;
        case GeneVariable::Shape:
          v = nearest_option(s, to_string(kind_of(n->shape)), [](const std::string& a, const std::string& b) {
            return parse_shape_kind(a) == parse_shape_kind(b);
          });
          break;
        case GeneVariable::Quantity: v = nearest_option(s, std::to_string(n->quantity), eq_long); break;
        case GeneVariable::Parent: v = nearest_option(s, std::to_string(n->parent_id), eq_long); break;
        case GeneVariable::Cell: v = nearest_option(s, std::to_string(n->catalogue_id.value_or(-1)), eq_long); break;
        case GeneVariable::Orientation:
          for (std::size_t i = 0; i < s.options.size(); ++i) {
            if (parse_orientation(s.options[i]).length == n->orientation.length) {
              v = static_cast<double>(i);
              if (parse_orientation(s.options[i]) == n->orientation) break;
            }
          }
          break;
        case GeneVariable::Thickness: v = n->wall_thickness.value_or(s.lo); break;
        case GeneVariable::PositionX: v = n->position.x(); break;
        case GeneVariable::PositionY: v = n->position.y(); break;
        case GeneVariable::PositionZ: v = n->position.z(); break;
        case GeneVariable::Radius:
          if (auto* c = std::get_if<CylinderShape>(&n->shape)) v = c->r;
          if (auto* sp = std::get_if<SphereShape>(&n->shape)) v = sp->r;
          break;
        case GeneVariable::Length: v = dims.x(); break;
        case GeneVariable::Width: v = dims.y(); break;
        case GeneVariable::Height: v = dims.z(); break;
        case GeneVariable::Wall: break;
      }
    }
    if (!is_integer_variable(s.variable) && s.is_integer()) {
      double best = std::numeric_limits<double>::infinity();
      double idx = 0;
      for (std::size_t i = 0; i < s.options.size(); ++i) {
        double d = std::abs(text::to_double(s.options[i], s.label) - v);
        if (d < best) {
          best = d;
          idx = static_cast<double>(i);
        }
      }
      v = idx;
    } else if (!s.is_integer()) {
      v = std::clamp(v, s.lo, s.hi);
    }
    g.push_back(v);
  }
  return g;
}

void clamp_positions(SpacecraftConfig& config) {
  Vec3 interior = config.parent_dims() / 2;
  for (auto& n : config.components) {
    Vec3 half = half_extents(n.shape, n.orientation);
    if (n.parent_id == kParentId) {
      for (int k = 0; k < 3; ++k) {
        double room = interior[k] - half[k];
        n.position[k] = room > 0 ? std::clamp(n.position[k], -room, room) : 0.0;
      }
    } else if (auto role = attached_panel(config, n)) {
      auto f = panel_frame(*role, config.parent_dims());
      double room_u = f.size_u / 2 - half[f.u_axis];
      double room_v = f.size_v / 2 - half[f.v_axis];
      n.position.x() = room_u > 0 ? std::clamp(n.position.x(), -room_u, room_u) : 0.0;
      n.position.y() = room_v > 0 ? std::clamp(n.position.y(), -room_v, room_v) : 0.0;
      n.position.z() = 0.0;
    }
  }
}

SpacecraftConfig apply_genome(const SpacecraftConfig& baseline, const std::vector<GeneSpec>& specs,
                              const Genome& genome) {
  check_genome(genome, specs);
  SpacecraftConfig cfg = baseline;
  for (std::size_t i = 0; i < specs.size(); ++i) apply_gene(cfg, specs[i], genome[i]);
  clamp_positions(cfg);
  return cfg;
}

SpacecraftConfig expand_instances(const SpacecraftConfig& config) {
  SpacecraftConfig out = config;
  out.components.clear();
  for (const auto& n : config.components) {
    if (n.quantity <= 1 || n.instance != 0 || !is_top_level(config, n)) {
      out.components.push_back(n);
      continue;
    }
    int q = n.quantity;
    double ring = 0;
    if (n.kind == ComponentKind::Tank && n.parent_id == kParentId) {
      double r = 0;
      if (auto* c = std::get_if<CylinderShape>(&n.shape)) r = c->r;
      if (auto* s = std::get_if<SphereShape>(&n.shape)) r = s->r;
      ring = 1.2 * r / std::sin(std::numbers::pi / q);
    }
    for (int k = 0; k < q; ++k) {
      ComponentNode c = n;
      c.instance = k;
      c.quantity = 1;
      if (ring > 0) {
        double a = 2 * std::numbers::pi * k / q;
        c.position = n.position + Vec3(ring * std::cos(a), 0, ring * std::sin(a));
      }
      out.components.push_back(std::move(c));
    }
  }
  clamp_positions(out);
  return out;
}

}  // namespace dfd

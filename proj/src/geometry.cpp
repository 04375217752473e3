#include "dfd/geometry.hpp"

#include <cmath>
#include <numbers>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace {
constexpr double kPi = std::numbers::pi;

int index_of(Axis a) { return static_cast<int>(a); }

Axis third_axis(Axis a, Axis b) { return static_cast<Axis>(3 - index_of(a) - index_of(b)); }
}  // namespace

ShapeKind kind_of(const Shape& s) { return static_cast<ShapeKind>(s.index()); }

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Box: return "box";
    case ShapeKind::Cylinder: return "cylinder";
    case ShapeKind::Sphere: return "sphere";
    case ShapeKind::FlatPlate: return "flat_plate";
  }
  return "?";
}

ShapeKind parse_shape_kind(const std::string& s) {
  auto t = text::lower(text::trim(s));
  if (t == "box") return ShapeKind::Box;
  if (t == "cylinder" || t == "cyl") return ShapeKind::Cylinder;
  if (t == "sphere") return ShapeKind::Sphere;
  if (t == "flat_plate" || t == "flatplate" || t == "plate") return ShapeKind::FlatPlate;
  throw ParseError("unknown shape '" + s + "'");
}

void validate(const Shape& s) {
  auto positive = [](double v) { return v > 0 && std::isfinite(v); };
  bool ok = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoxShape>) return positive(x.l) && positive(x.w) && positive(x.h);
        if constexpr (std::is_same_v<T, CylinderShape>) return positive(x.l) && positive(x.r);
        if constexpr (std::is_same_v<T, SphereShape>) return positive(x.r);
        if constexpr (std::is_same_v<T, FlatPlateShape>) return positive(x.l) && positive(x.w);
      },
      s);
  if (!ok) throw InvariantError(to_string(kind_of(s)) + " dimensions must all be > 0");
}

double surface_area(const Shape& s) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoxShape>) return 2 * (x.l * x.w + x.l * x.h + x.w * x.h);
        if constexpr (std::is_same_v<T, CylinderShape>) return 2 * kPi * x.r * (x.r + x.l);
        if constexpr (std::is_same_v<T, SphereShape>) return 4 * kPi * x.r * x.r;
        if constexpr (std::is_same_v<T, FlatPlateShape>) return 2 * x.l * x.w;
      },
      s);
}

double volume(const Shape& s) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoxShape>) return x.l * x.w * x.h;
        if constexpr (std::is_same_v<T, CylinderShape>) return kPi * x.r * x.r * x.l;
        if constexpr (std::is_same_v<T, SphereShape>) return 4.0 / 3.0 * kPi * x.r * x.r * x.r;
        if constexpr (std::is_same_v<T, FlatPlateShape>) return 0.0;
      },
      s);
}

double mean_projected_area(const Shape& s) { return surface_area(s) / 4.0; }

Axis parse_axis(const std::string& s) {
  auto t = text::lower(text::trim(s));
  if (t == "x" || t == "ram" || t == "trail") return Axis::X;
  if (t == "y" || t == "left" || t == "right") return Axis::Y;
  if (t == "z" || t == "earth" || t == "space") return Axis::Z;
  throw ParseError("unknown axis '" + s + "'");
}

Orientation parse_orientation(const std::string& s) {
  auto parts = text::split(s, ',');
  Orientation o;
  o.length = parse_axis(parts.at(0));
  if (parts.size() >= 2) {
    o.width = parse_axis(parts[1]);
  } else {
    o.width = o.length == Axis::Y ? Axis::X : Axis::Y;
  }
  if (parts.size() > 2 || o.width == o.length) {
    throw ParseError("orientation '" + s + "' must name one axis or two distinct axes");
  }
  return o;
}

std::string to_string(const Orientation& o, ShapeKind kind) {
  static const char* names[] = {"x", "y", "z"};
  std::string out = names[index_of(o.length)];
  if (kind == ShapeKind::Box || kind == ShapeKind::FlatPlate) {
    out += ",";
    out += names[index_of(o.width)];
  }
  return out;
}

Vec3 half_extents(const Shape& s, const Orientation& o) {
  Vec3 e = Vec3::Zero();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          e[index_of(o.length)] = x.l / 2;
          e[index_of(o.width)] = x.w / 2;
          e[index_of(third_axis(o.length, o.width))] = x.h / 2;
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          e.setConstant(x.r);
          e[index_of(o.length)] = x.l / 2;
        } else if constexpr (std::is_same_v<T, SphereShape>) {
          e.setConstant(x.r);
        } else if constexpr (std::is_same_v<T, FlatPlateShape>) {
          e[index_of(o.length)] = x.l / 2;
          e[index_of(o.width)] = x.w / 2;
        }
      },
      s);
  return e;
}

int panel_id(PanelRole r) { return static_cast<int>(r) + 2; }

PanelRole role_from_panel_id(int id) {
  if (!is_panel_id(id)) throw DomainError("id " + std::to_string(id) + " is not a panel id (2..7)");
  return static_cast<PanelRole>(id - 2);
}

bool is_panel_id(int id) { return id >= 2 && id <= 7; }

std::string to_string(PanelRole r) {
  switch (r) {
    case PanelRole::Ram: return "ram";
    case PanelRole::Trail: return "trail";
    case PanelRole::Earth: return "earth";
    case PanelRole::Space: return "space";
    case PanelRole::Left: return "left";
    case PanelRole::Right: return "right";
  }
  return "?";
}

PanelRole parse_panel_role(const std::string& s) {
  auto t = text::lower(text::trim(s));
  for (auto r : kAllPanelRoles) {
    if (to_string(r) == t) return r;
  }
  throw ParseError("unknown panel role '" + s + "'");
}

PanelFrame panel_frame(PanelRole r, const Vec3& dims) {
  PanelFrame f;
  auto set = [&](int n_axis, double sign, int u_axis, int v_axis) {
    f.normal = Vec3::Zero();
    f.normal[n_axis] = sign;
    f.u = Vec3::Unit(u_axis);
    f.v = Vec3::Unit(v_axis);
    f.centre = f.normal * (dims[n_axis] / 2);
    f.size_u = dims[u_axis];
    f.size_v = dims[v_axis];
    f.normal_axis = n_axis;
    f.u_axis = u_axis;
    f.v_axis = v_axis;
  };
  switch (r) {
    case PanelRole::Ram: set(0, +1, 1, 2); break;
    case PanelRole::Trail: set(0, -1, 1, 2); break;
    case PanelRole::Earth: set(2, -1, 0, 1); break;
    case PanelRole::Space: set(2, +1, 0, 1); break;
    case PanelRole::Left: set(1, +1, 0, 2); break;
    case PanelRole::Right: set(1, -1, 0, 2); break;
  }
  return f;
}

}  // namespace dfd

#pragma once

#include <array>
#include <string>
#include <variant>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dfd {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Box3 = Eigen::AlignedBox3d;

struct BoxShape {
  double l = 0, w = 0, h = 0;
  bool operator==(const BoxShape&) const = default;
};
struct CylinderShape {
  double l = 0, r = 0;
  bool operator==(const CylinderShape&) const = default;
};
struct SphereShape {
  double r = 0;
  bool operator==(const SphereShape&) const = default;
};
struct FlatPlateShape {
  double l = 0, w = 0;
  bool operator==(const FlatPlateShape&) const = default;
};

using Shape = std::variant<BoxShape, CylinderShape, SphereShape, FlatPlateShape>;

enum class ShapeKind { Box, Cylinder, Sphere, FlatPlate };

ShapeKind kind_of(const Shape& s);
std::string to_string(ShapeKind k);
/// Accepts box, cylinder/cyl, sphere, flat_plate/flatplate/plate.
ShapeKind parse_shape_kind(const std::string& s);

/// Throws InvariantError if any dimension is non-positive.
void validate(const Shape& s);

double surface_area(const Shape& s);
double volume(const Shape& s);
/// Tumbling-averaged projected area of a convex body: S/4 (Cauchy).
/// Flat plates count both faces.
double mean_projected_area(const Shape& s);

/// Body axes. RAM = +x, Trail = -x, Left = +y, Right = -y, Space = +z, Earth = -z.
enum class Axis { X, Y, Z };

/// Direction pair for boxes (length, width); cylinders use only `length`.
struct Orientation {
  Axis length = Axis::X;
  Axis width = Axis::Y;
  bool operator==(const Orientation&) const = default;
};

/// Accepts "x", "ram", "trail", ... for a single axis, and "a,b" pairs.
Axis parse_axis(const std::string& s);
Orientation parse_orientation(const std::string& s);
std::string to_string(const Orientation& o, ShapeKind kind);

/// Half-extents of the axis-aligned bounding box of `s` laid out with `o`.
Vec3 half_extents(const Shape& s, const Orientation& o);

enum class PanelRole { Ram, Trail, Earth, Space, Left, Right };

constexpr std::array<PanelRole, 6> kAllPanelRoles = {PanelRole::Ram,   PanelRole::Trail,
                                                     PanelRole::Earth, PanelRole::Space,
                                                     PanelRole::Left,  PanelRole::Right};

/// Panel ids 2..7 in the order RAM, Trail, Earth, Space, Left, Right.
int panel_id(PanelRole r);
PanelRole role_from_panel_id(int id);
bool is_panel_id(int id);
std::string to_string(PanelRole r);
PanelRole parse_panel_role(const std::string& s);

/// Panel-centred frame on the parent box: outward normal, in-plane (u, v)
/// axes, centre of the panel, and its size along u and v.
struct PanelFrame {
  Vec3 normal;
  Vec3 u;
  Vec3 v;
  Vec3 centre;
  double size_u = 0;
  double size_v = 0;
  int normal_axis = 0;
  int u_axis = 0;
  int v_axis = 0;
};

/// Frame of panel `r` on a parent box of full dimensions (l, w, h) along
/// (x, y, z), centred at the origin.
///   RAM/Trail: u = y, v = z.  Earth/Space: u = x, v = y.  Left/Right: u = x, v = z.
PanelFrame panel_frame(PanelRole r, const Vec3& parent_dims);

}  // namespace dfd

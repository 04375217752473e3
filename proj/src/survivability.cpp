#include "dfd/survivability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <tuple>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_point.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace bg = boost::geometry;

namespace {

using Point2 = bg::model::d2::point_xy<double>;
using Polygon2 = bg::model::polygon<Point2>;
using MultiPolygon2 = bg::model::multi_polygon<Polygon2>;

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

Vec3 VectorFluxElement::direction() const {
  return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
          std::sin(elevation)};
}

double DebrisEnvironment::total_flux() const {
  double sum = 0;
  for (const auto& e : elements) sum += e.flux;
  return sum;
}

DebrisEnvironment parse_flux_table(const std::string& csv_content) {
  auto rows = text::parse_csv(csv_content);
  DebrisEnvironment env;
  if (rows.empty()) return env;

  const char* names[] = {"flux_m2yr", "diameter_m", "velocity_ms", "azimuth_deg", "elevation_deg"};
  const auto& header = rows.front();
  std::size_t col[5];
  for (int k = 0; k < 5; ++k) {
    auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) throw ParseError(std::string("flux table: missing column '") + names[k] + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw ParseError("flux table row " + std::to_string(i) + ": expected " + std::to_string(header.size()) +
                       " fields");
    }
    VectorFluxElement e;
    e.flux = text::to_double(r[col[0]], "flux_m2yr");
    e.diameter = text::to_double(r[col[1]], "diameter_m");
    e.velocity = text::to_double(r[col[2]], "velocity_ms");
    e.azimuth = text::to_double(r[col[3]], "azimuth_deg") * kDeg;
    e.elevation = text::to_double(r[col[4]], "elevation_deg") * kDeg;
    if (e.flux < 0) throw NegativeFlux("flux table row " + std::to_string(i) + ": negative flux");
    if (!(e.diameter > 0) || !(e.velocity > 0)) {
      throw ParseError("flux table row " + std::to_string(i) + ": diameter and velocity must be > 0");
    }
    env.elements.push_back(e);
  }
  return env;
}

DebrisEnvironment load_flux_table(const std::string& path) {
  return parse_flux_table(text::read_file(path));
}

void write_flux_table(std::ostream& os, const DebrisEnvironment& env) {
  os << "flux_m2yr,diameter_m,velocity_ms,azimuth_deg,elevation_deg\n";
  for (const auto& e : env.elements) {
    os << text::format_double(e.flux) << ',' << text::format_double(e.diameter) << ','
       << text::format_double(e.velocity) << ',' << text::format_double(e.azimuth / kDeg) << ','
       << text::format_double(e.elevation / kDeg) << '\n';
  }
}

DebrisEnvironment isotropic_environment(const std::vector<double>& diameters,
                                        const std::vector<double>& flux_per_diameter, double velocity) {
  if (diameters.size() != flux_per_diameter.size()) throw DomainError("one flux per diameter expected");
  DebrisEnvironment env;
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    for (int s = 0; s < 8; ++s) {
      env.elements.push_back({flux_per_diameter[i] / 8.0, diameters[i], velocity, s * 45.0 * kDeg, 0.0});
    }
  }
  return env;
}

DebrisEnvironment front_loaded_environment(const std::vector<double>& diameters,
                                           const std::vector<double>& flux_per_diameter) {
  if (diameters.size() != flux_per_diameter.size()) throw DomainError("one flux per diameter expected");
  std::vector<double> az, weight, speed;
  double total = 0;
  for (int k = -5; k <= 6; ++k) {
    double a = k * 30.0;
    double w = std::abs(a) >= 120.0 ? 0.0 : std::exp(-std::pow((std::abs(a) - 45.0) / 35.0, 2));
    az.push_back(a);
    weight.push_back(w);
    speed.push_back(std::max(1000.0, 15000.0 * std::cos(a * kDeg / 2)));
    total += w;
  }
  DebrisEnvironment env;
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    for (std::size_t s = 0; s < az.size(); ++s) {
      env.elements.push_back({flux_per_diameter[i] * weight[s] / total, diameters[i], speed[s], az[s] * kDeg, 0.0});
    }
  }
  return env;
}

double critical_diameter(double thickness, const MaterialRecord& wall, double v_normal,
                         const BleCoefficients& ble) {
  if (!wall.hb || !wall.c_sound) {
    throw MissingMaterialData("material '" + wall.name + "' has no Brinell hardness or speed of sound");
  }
  if (!(thickness > 0)) throw DomainError("wall thickness must be > 0");
  if (!(v_normal > 0)) return std::numeric_limits<double>::infinity();
  double denom = ble.spall_factor * ble.k_craters * std::pow(*wall.hb, -ble.hb_exp) *
                 std::pow(ble.projectile_density / wall.rho_m, ble.dens_exp) *
                 std::pow(v_normal / *wall.c_sound, ble.vel_exp);
  return std::pow(thickness / denom, ble.thick_exp);
}

std::vector<Sheet> panel_sheets(const PanelSpec& panel, const MaterialDatabase& db) {
  const auto* m = &db.lookup(panel.material);
  double t = panel.face_thickness;
  switch (panel.wall_type) {
    case WallType::SingleWall: return {{t, m}};
    case WallType::Whipple: return {{t, m}, {t, m}};
    case WallType::HoneycombSandwich: return {{t, m}, {t + panel.hc_areal_density / m->rho_m, m}};
  }
  return {{t, m}};
}

namespace {

double stack_threshold(const std::vector<Sheet>& sheets, double v_normal, const BleCoefficients& ble,
                       double attenuation, bool transparent_missing) {
  double d = 0;
  double v = v_normal;
  for (const auto& s : sheets) {
    bool usable = s.material->hb && s.material->c_sound;
    if (usable || !transparent_missing) d = std::max(d, critical_diameter(s.thickness, *s.material, v, ble));
    v *= attenuation;
  }
  return d;
}

}  // namespace

double stack_critical_diameter(const std::vector<Sheet>& sheets, double v_normal, const BleCoefficients& ble,
                               double attenuation) {
  return stack_threshold(sheets, v_normal, ble, attenuation, false);
}

double poisson_probability(double expected) { return -std::expm1(-expected); }

PenetrationResult panel_penetration_probability(const PanelSpec& panel, const DebrisEnvironment& env,
                                                const MaterialDatabase& db,
                                                const SurvivabilitySettings& settings) {
  PenetrationResult out;
  out.target_id = panel.id;
  auto sheets = panel_sheets(panel, db);
  Vec3 normal = panel_frame(panel.role, Vec3::Ones()).normal;
  for (const auto& e : env.elements) {
    double cos_t = normal.dot(e.direction());
    if (cos_t <= 0 || e.flux == 0) continue;
    double d_c = stack_threshold(sheets, e.velocity * cos_t, settings.ble, settings.attenuation,
                                 settings.transparent_missing_ble);
    if (e.diameter < d_c) continue;
    out.expected_penetrations += e.flux * panel.area() * cos_t * settings.lifetime_years;
  }
  out.probability = poisson_probability(out.expected_penetrations);
  return out;
}

namespace {

/// Entry distance of the ray o + s * dir (s >= 0) into `box`, or nullopt.
std::optional<double> ray_entry(const Vec3& o, const Vec3& dir, const Box3& box) {
  double lo = 0, hi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(dir[k]) < 1e-15) {
      if (o[k] < box.min()[k] || o[k] > box.max()[k]) return std::nullopt;
      continue;
    }
    double a = (box.min()[k] - o[k]) / dir[k];
    double b = (box.max()[k] - o[k]) / dir[k];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

struct Zone {
  MultiPolygon2 shape;
  double area = 0;
};

Zone projected_zone(const Box3& box, const PanelFrame& f, const Vec3& d) {
  double nd = f.normal.dot(d);
  bg::model::multi_point<Point2> pts;
  for (int c = 0; c < 8; ++c) {
    Vec3 p = box.corner(static_cast<Box3::CornerType>(c));
    Vec3 q = p + d * (f.normal.dot(f.centre - p) / nd);
    bg::append(pts, Point2(f.u.dot(q - f.centre), f.v.dot(q - f.centre)));
  }
  Polygon2 hull;
  bg::convex_hull(pts, hull);

  double hu = f.size_u / 2, hv = f.size_v / 2;
  Polygon2 rect;
  bg::append(rect.outer(), Point2(-hu, -hv));
  bg::append(rect.outer(), Point2(-hu, hv));
  bg::append(rect.outer(), Point2(hu, hv));
  bg::append(rect.outer(), Point2(hu, -hv));
  bg::append(rect.outer(), Point2(-hu, -hv));
  bg::correct(rect);
  bg::correct(hull);

  Zone z;
  if (bg::area(hull) <= 0) return z;
  bg::intersection(hull, rect, z.shape);
  z.area = bg::area(z.shape);
  return z;
}

}  // namespace

VulnerableZone vulnerable_zone(const SpacecraftConfig& config, const ComponentNode& node, PanelRole panel,
                               const Vec3& direction, int samples) {
  VulnerableZone out;
  auto f = panel_frame(panel, config.parent_dims());
  Vec3 d = direction.normalized();
  if (f.normal.dot(d) <= 0) return out;

  Box3 target = body_box(config, node);
  Zone z = projected_zone(target, f, d);
  out.area = z.area;
  if (z.area <= 0) return out;

  std::vector<Box3> others;
  for (const auto& c : config.components) {
    if (c.id == node.id && c.instance == node.instance) continue;
    if (!is_top_level(config, c)) continue;
    others.push_back(body_box(config, c));
  }
  if (others.empty()) return out;

  bg::model::box<Point2> bounds;
  bg::envelope(z.shape, bounds);
  double u0 = bounds.min_corner().x(), v0 = bounds.min_corner().y();
  double du = (bounds.max_corner().x() - u0) / samples;
  double dv = (bounds.max_corner().y() - v0) / samples;
  int inside = 0, shadowed = 0;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      Point2 p(u0 + (i + 0.5) * du, v0 + (j + 0.5) * dv);
      if (!bg::within(p, z.shape)) continue;
      Vec3 o = f.centre + f.u * p.x() + f.v * p.y();
      auto hit = ray_entry(o, -d, target);
      if (!hit) continue;
      ++inside;
      for (const auto& b : others) {
        auto h = ray_entry(o, -d, b);
        if (h && *h < *hit) {
          ++shadowed;
          break;
        }
      }
    }
  }
  if (inside > 0) out.occlusion = static_cast<double>(shadowed) / inside;
  return out;
}

PenetrationResult component_penetration_probability(const ComponentNode& node, const SpacecraftConfig& config,
                                                    const DebrisEnvironment& env, const MaterialDatabase& db,
                                                    const SurvivabilitySettings& settings) {
  PenetrationResult out;
  out.target_id = node.id;
  out.instance = node.instance;

  std::optional<Sheet> wall;
  if (node.wall_thickness && *node.wall_thickness > 0) wall = Sheet{*node.wall_thickness, &db.lookup(node.material)};

  struct PanelPath {
    PanelFrame frame;
    std::vector<Sheet> sheets;
  };
  std::vector<PanelPath> paths;
  for (const auto& p : config.panels) {
    PanelPath path{panel_frame(p.role, config.parent_dims()), panel_sheets(p, db)};
    if (wall) path.sheets.push_back(*wall);
    paths.push_back(std::move(path));
  }

  std::map<std::tuple<std::size_t, double, double>, VulnerableZone> zones;
  for (const auto& e : env.elements) {
    if (e.flux == 0) continue;
    Vec3 d = e.direction();
    for (std::size_t k = 0; k < paths.size(); ++k) {
      double cos_t = paths[k].frame.normal.dot(d);
      if (cos_t <= 0) continue;
      double d_c = stack_threshold(paths[k].sheets, e.velocity * cos_t, settings.ble, settings.attenuation,
                                   settings.transparent_missing_ble);
      if (e.diameter < d_c) continue;
      auto key = std::make_tuple(k, e.azimuth, e.elevation);
      auto it = zones.find(key);
      if (it == zones.end()) {
        it = zones.emplace(key, vulnerable_zone(config, node, config.panels[k].role, d, settings.occlusion_samples))
                 .first;
      }
      const auto& zone = it->second;
      out.expected_penetrations +=
          e.flux * zone.area * cos_t * (1.0 - zone.occlusion) * settings.lifetime_years;
    }
  }
  out.probability = poisson_probability(out.expected_penetrations);
  return out;
}

double compute_pnp(const std::vector<PenetrationResult>& results, bool product_form, bool* clamped) {
  if (results.empty()) throw EmptyInput("PNP needs at least one component");
  if (clamped) *clamped = false;
  if (product_form) {
    double survive = 1;
    for (const auto& r : results) survive *= 1.0 - r.probability;
    return survive;
  }
  double sum = 0;
  for (const auto& r : results) sum += r.probability;
  double pnp = 1.0 - sum;
  if (pnp < 0 || pnp > 1) {
    if (clamped) *clamped = true;
    pnp = std::clamp(pnp, 0.0, 1.0);
  }
  return pnp;
}

std::vector<PenetrationResult> analyse_components(const SpacecraftConfig& config, const DebrisEnvironment& env,
                                                  const MaterialDatabase& db,
                                                  const SurvivabilitySettings& settings) {
  std::vector<PenetrationResult> out;
  for (const auto& c : config.components) {
    if (!is_top_level(config, c)) continue;
    out.push_back(component_penetration_probability(c, config, env, db, settings));
  }
  return out;
}

}  // namespace dfd

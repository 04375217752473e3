#include "dfd/demise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "dfd/error.hpp"

namespace dfd {

double ShapeCoefficients::operator()(ShapeKind k) const {
  switch (k) {
    case ShapeKind::Sphere: return sphere;
    case ShapeKind::Cylinder: return cylinder;
    case ShapeKind::Box: return box;
    case ShapeKind::FlatPlate: return flat_plate;
  }
  return box;
}

namespace {

using StateVec = std::array<double, 6>;  // h, v, gamma, lon, lat, heading

constexpr double kSteepDescent = 80.0 * 3.14159265358979323846 / 180.0;

StateVec to_vec(const TrajectoryState& s) {
  return {s.altitude, s.velocity, s.flight_path_angle, s.longitude, s.latitude, s.heading};
}

StateVec derivatives(const StateVec& x, double beta, const Atmosphere& atm) {
  double h = x[0], v = x[1], gamma = x[2], lat = x[4], psi = x[5];
  double r = kEarthRadius + h;
  double g = kEarthMu / (r * r);
  double rho = atm.density(h);
  double cg = std::cos(gamma), sg = std::sin(gamma);
  double vc = std::max(v, 1e-6);
  StateVec d;
  d[0] = v * sg;
  d[1] = -rho * v * v / (2.0 * beta) - g * sg;
  d[2] = (v / r - g / vc) * cg;
  d[3] = v * cg * std::cos(psi) / (r * std::cos(lat));
  d[4] = v * cg * std::sin(psi) / r;
  d[5] = -v * cg * std::cos(psi) * std::tan(lat) / r;
  return d;
}

StateVec axpy(const StateVec& x, double a, const StateVec& y) {
  StateVec out;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

}  // namespace

TrajectoryState propagate_step(const TrajectoryState& s, double beta, double dt, const Atmosphere& atm) {
  if (!(dt > 0)) throw DomainError("propagate_step needs dt > 0");
  if (!(beta > 0)) throw DomainError("propagate_step needs a positive ballistic coefficient");
  StateVec x = to_vec(s);
  StateVec k1 = derivatives(x, beta, atm);
  StateVec k2 = derivatives(axpy(x, dt / 2, k1), beta, atm);
  StateVec k3 = derivatives(axpy(x, dt / 2, k2), beta, atm);
  StateVec k4 = derivatives(axpy(x, dt, k3), beta, atm);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  TrajectoryState out{x[0], x[1], x[2], x[3], x[4], x[5], s.time + dt};
  return out;
}

double heat_flux(double rho, double velocity, double rn) {
  if (!(rn > 0)) throw DomainError("heat_flux needs a positive nose radius");
  if (rho <= 0) return 0.0;
  return kHeatFluxCoefficient * std::sqrt(rho / rn) * velocity * velocity * velocity;
}

double heat_flux(const TrajectoryState& s, double rn, const Atmosphere& atm) {
  return heat_flux(atm.density(s.altitude), s.velocity, rn);
}

double nose_radius(const Shape& shape, double thickness, double min_radius) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SphereShape>) return x.r;
        if constexpr (std::is_same_v<T, CylinderShape>) return x.r;
        if constexpr (std::is_same_v<T, BoxShape>) return std::min({x.l, x.w, x.h}) / 2;
        if constexpr (std::is_same_v<T, FlatPlateShape>) return std::max(thickness / 2, min_radius);
      },
      shape);
}

namespace {

// Returns the mass the step asked to melt (before flooring at zero).
double thermal_step(ThermalState& t, double q_conv, const MaterialRecord& m, double area, double dt) {
  if (t.remaining_mass <= 0) return 0.0;
  double q_net = q_conv - m.epsilon * kStefanBoltzmann * std::pow(t.temperature, 4) * area;
  double energy = q_net * dt;
  t.absorbed_heat += energy;
  double melt_energy = 0.0;
  if (t.temperature < m.t_m || q_net < 0) {
    double capacity = t.remaining_mass * m.c_m;
    double next = t.temperature + energy / capacity;
    if (next > m.t_m) {
      melt_energy = (next - m.t_m) * capacity;
      t.temperature = m.t_m;
    } else {
      t.temperature = std::max(next, 0.0);
    }
  } else {
    melt_energy = energy;
  }
  double dm = melt_energy / m.h_f;
  t.remaining_mass = std::max(0.0, t.remaining_mass - dm);
  return dm;
}

struct Body {
  ComponentNode node;
  bool internal = true;
  int count = 1;
  double thermal_mass = 0.0;
  double aero_mass = 0.0;
  std::vector<const ComponentNode*> children;
};

struct Released {
  Body body;
  TrajectoryState state;
  bool prepared = false;  // body masses filled in
};

TrajectoryState interpolate(const TrajectoryState& a, const TrajectoryState& b, double f) {
  auto lerp = [f](double x, double y) { return x + f * (y - x); };
  return {lerp(a.altitude, b.altitude), lerp(a.velocity, b.velocity),
          lerp(a.flight_path_angle, b.flight_path_angle), lerp(a.longitude, b.longitude),
          lerp(a.latitude, b.latitude), lerp(a.heading, b.heading), lerp(a.time, b.time)};
}

std::vector<const ComponentNode*> contained_children(const SpacecraftConfig& config, const ComponentNode& node) {
  std::vector<const ComponentNode*> out;
  if (node.instance != 0) return out;
  for (const auto& c : config.components) {
    if (c.parent_id == node.id && &c != &node && !attached_panel(config, c)) out.push_back(&c);
  }
  return out;
}

Body make_body(const SpacecraftConfig& config, const ComponentNode& node, const MaterialDatabase& db) {
  Body b;
  b.node = node;
  b.thermal_mass = component_mass(node, db);
  b.aero_mass = aero_mass(config, node, db);
  b.children = contained_children(config, node);
  return b;
}

Body panel_body(const PanelSpec& p, const MaterialDatabase& db) {
  Body b;
  b.internal = false;
  b.node.id = p.id;
  b.node.name = to_string(p.role) + " panel";
  b.node.shape = FlatPlateShape{p.l, p.w};
  b.node.material = p.material;
  b.node.wall_thickness = p.face_thickness;
  b.node.t_init = p.t_init;
  b.thermal_mass = panel_mass(p, db);
  b.aero_mass = b.thermal_mass;
  return b;
}

FragmentResult fly(const Released& r, const MaterialDatabase& db, const Atmosphere& atm,
                   const DemiseOptions& opt, bool record, std::deque<Released>& queue) {
  const auto& body = r.body;
  const auto& mat = db.lookup(body.node.material);
  ShapeKind kind = kind_of(body.node.shape);
  double area = surface_area(body.node.shape);
  double cda = opt.drag(kind) * mean_projected_area(body.node.shape);
  double rn = nose_radius(body.node.shape, body.node.wall_thickness.value_or(0.0), opt.min_nose_radius);
  double factor = opt.heating(kind);

  FragmentResult res;
  res.id = body.node.id;
  res.instance = body.node.instance;
  res.name = body.node.name;
  res.internal = body.internal;
  res.count = body.count;
  res.initial_mass = body.thermal_mass;
  res.release_altitude = r.state.altitude;

  ThermalState th{body.node.t_init, body.thermal_mass, 0.0};
  TrajectoryState s = r.state;
  double carried = body.aero_mass - body.thermal_mass;  // mass that does not ablate
  if (record) res.mass_history.push_back(th.remaining_mass);

  auto release_children = [&](const TrajectoryState& at) {
    for (const auto* c : body.children) {
      Released child;
      child.body.node = *c;
      child.body.count = body.count * c->quantity;
      child.state = at;
      queue.push_back(std::move(child));
    }
  };

  while (true) {
    if (s.time - r.state.time > opt.max_flight_time) {
      throw ConfigError("fragment '" + body.node.name + "' did not reach the ground within the time limit");
    }
    double q_abs = factor * heat_flux(s, rn, atm) * mean_projected_area(body.node.shape);
    double beta = std::max(carried + th.remaining_mass, 1e-9) / cda;
    TrajectoryState next = propagate_step(s, beta, opt.dt, atm);
    double before = th.remaining_mass;
    double demand = thermal_step(th, q_abs, mat, area, opt.dt);
    res.incident_heat += q_abs * opt.dt;
    if (record) res.mass_history.push_back(th.remaining_mass);

    if (th.remaining_mass <= 0 && before > 0) {
      double f = demand > 0 ? std::clamp(before / demand, 0.0, 1.0) : 1.0;
      TrajectoryState at = interpolate(s, next, f);
      if (at.altitude > 0) {
        res.demised = true;
        res.demise_altitude = at.altitude;
        release_children(at);
        break;
      }
    }
    if (next.altitude <= 0) {
      double f = s.altitude / (s.altitude - next.altitude);
      TrajectoryState at = interpolate(s, next, f);
      res.landing_longitude = at.longitude;
      res.landing_latitude = at.latitude;
      double m = carried + th.remaining_mass;
      res.impact_energy = 0.5 * m * at.velocity * at.velocity;
      if (th.remaining_mass <= 0) {
        res.demised = true;
        res.demise_altitude = 0.0;
      }
      break;
    }
    s = next;

    // Ablation is over once a sub-melting body falls near terminal speed and
    // radiates more than it receives: the flux only drops further down.
    if (th.temperature < mat.t_m && s.flight_path_angle < -kSteepDescent) {
      double m = std::max(carried + th.remaining_mass, 1e-9);
      double r_loc = kEarthRadius + s.altitude;
      double g = kEarthMu / (r_loc * r_loc);
      double v_term = std::sqrt(2.0 * (m / cda) * g / atm.density(s.altitude));
      double q_in = factor * heat_flux(s, rn, atm) * mean_projected_area(body.node.shape);
      double q_out = mat.epsilon * kStefanBoltzmann * std::pow(th.temperature, 4) * area;
      if (s.velocity <= 1.2 * v_term && q_in < q_out) {
        double g0 = kEarthMu / (kEarthRadius * kEarthRadius);
        double v_ground = std::min(s.velocity, std::sqrt(2.0 * (m / cda) * g0 / atm.density(0.0)));
        res.landing_longitude = s.longitude;
        res.landing_latitude = s.latitude;
        res.impact_energy = 0.5 * m * v_ground * v_ground;
        break;
      }
    }
  }
  res.final_mass = th.remaining_mass;
  res.absorbed_heat = th.absorbed_heat;
  if (!res.demised) {
    // contents of a surviving container reach the ground intact
    for (const auto* c : body.children) {
      Released child;
      child.body.node = *c;
      child.body.count = body.count * c->quantity;
      child.state = s;
      child.state.altitude = -1.0;
      queue.push_back(std::move(child));
    }
  }
  return res;
}

}  // namespace

ThermalState thermal_update(const ThermalState& t, double q_conv, const MaterialRecord& m, double area,
                            double dt) {
  if (!(dt > 0)) throw DomainError("thermal_update needs dt > 0");
  ThermalState out = t;
  thermal_step(out, q_conv, m, area, dt);
  return out;
}

ReentryResult simulate_reentry(const SpacecraftConfig& config, const TrajectoryState& entry,
                               const ReentryEvents& events, const MaterialDatabase& db,
                               const Atmosphere& atm, const DemiseOptions& opt, bool record_history) {
  if (!(entry.altitude > events.breakup_altitude)) {
    throw ConfigError("entry altitude must lie above the breakup altitude");
  }
  if (!(entry.velocity > 0)) throw ConfigError("entry velocity must be > 0");

  ReentryResult out;
  std::deque<Released> queue;

  // phase 1: the parent alone
  double parent_mass = config.parent_mass();
  const Shape& parent_shape = config.parent.shape;
  double parent_cda = opt.drag(ShapeKind::Box) * mean_projected_area(parent_shape);
  double parent_rn = nose_radius(parent_shape, 0.0, opt.min_nose_radius);
  double parent_factor = opt.heating(ShapeKind::Box);

  struct SolarState {
    const SolarArray* array;
    double altitude;
    bool attached = true;
  };
  std::vector<SolarState> solar;
  double solar_cda = 0.0;
  for (const auto& a : config.solar_panels) {
    solar.push_back({&a, events.solar_detach_altitude.value_or(a.detach_altitude)});
    solar_cda += opt.drag(ShapeKind::FlatPlate) * mean_projected_area(FlatPlateShape{a.l, a.w});
  }

  struct PanelState {
    const PanelSpec* spec;
    ThermalState thermal;
    const MaterialRecord* material;
    bool attached = true;
  };
  std::vector<PanelState> panels;
  for (const auto& p : config.panels) {
    panels.push_back({&p, ThermalState{p.t_init, panel_mass(p, db), 0.0}, &db.lookup(p.material)});
  }

  std::vector<const ComponentNode*> onboard;
  for (const auto& c : config.components) {
    if (is_top_level(config, c)) onboard.push_back(&c);
  }

  auto release = [&](const ComponentNode& n, const TrajectoryState& at) {
    Released r;
    r.body.node = n;
    r.state = at;
    parent_mass -= aero_mass(config, n, db);
    queue.push_back(std::move(r));
  };

  TrajectoryState s = entry;
  while (true) {
    if (s.time - entry.time > opt.max_flight_time) {
      throw ConfigError("parent did not reach the breakup altitude within the time limit");
    }
    double q = parent_factor * heat_flux(s, parent_rn, atm);
    double beta = std::max(parent_mass, 1e-6) / (parent_cda + solar_cda);
    TrajectoryState next = propagate_step(s, beta, opt.dt, atm);

    for (auto& sa : solar) {
      if (sa.attached && next.altitude <= sa.altitude) {
        sa.attached = false;
        parent_mass -= sa.array->mass;
        solar_cda -= opt.drag(ShapeKind::FlatPlate) * mean_projected_area(FlatPlateShape{sa.array->l, sa.array->w});
      }
    }
    for (auto& p : panels) {
      if (!p.attached) continue;
      double a = p.spec->area();
      p.thermal = thermal_update(p.thermal, q * a / 4.0, *p.material, a, opt.dt);
      if (events.panel_detach && p.thermal.temperature >= p.material->t_m) {
        p.attached = false;
        parent_mass -= panel_mass(*p.spec, db);
        out.panel_detachments.emplace_back(p.spec->id, next.altitude);
        for (auto it = onboard.begin(); it != onboard.end();) {
          auto role = attached_panel(config, **it);
          if (role && panel_id(*role) == p.spec->id) {
            release(**it, next);
            it = onboard.erase(it);
          } else {
            ++it;
          }
        }
        if (opt.track_panel_fragments) {
          Released r;
          r.body = panel_body(*p.spec, db);
          r.body.node.t_init = p.thermal.temperature;
          r.state = next;
          r.prepared = true;
          queue.push_back(std::move(r));
        }
      }
    }
    s = next;
    if (s.altitude <= events.breakup_altitude) break;
  }
  out.breakup_state = s;

  for (const auto* n : onboard) release(*n, s);
  if (opt.track_panel_fragments) {
    for (const auto& p : panels) {
      if (!p.attached) continue;
      Released r;
      r.body = panel_body(*p.spec, db);
      r.body.node.t_init = p.thermal.temperature;
      r.state = s;
      r.prepared = true;
      queue.push_back(std::move(r));
    }
  }

  // phase 2: every fragment on its own
  while (!queue.empty()) {
    Released r = std::move(queue.front());
    queue.pop_front();
    if (!r.prepared) {
      int count = r.body.count;
      r.body = make_body(config, r.body.node, db);
      r.body.count = count;
    }
    if (r.state.altitude <= 0) {
      // landed inside a surviving container
      FragmentResult res;
      res.id = r.body.node.id;
      res.instance = r.body.node.instance;
      res.name = r.body.node.name;
      res.internal = r.body.internal;
      res.count = r.body.count;
      res.initial_mass = r.body.thermal_mass;
      res.final_mass = r.body.thermal_mass;
      res.release_altitude = 0.0;
      res.landing_longitude = r.state.longitude;
      res.landing_latitude = r.state.latitude;
      if (record_history) res.mass_history = {res.final_mass};
      for (const auto* c : r.body.children) {
        Released child;
        child.body.node = *c;
        child.body.count = r.body.count * c->quantity;
        child.state = r.state;
        queue.push_back(std::move(child));
      }
      out.fragments.push_back(std::move(res));
      continue;
    }
    out.fragments.push_back(fly(r, db, atm, opt, record_history, queue));
  }

  std::sort(out.fragments.begin(), out.fragments.end(), [](const FragmentResult& a, const FragmentResult& b) {
    if (a.internal != b.internal) return a.internal;
    if (a.id != b.id) return a.id < b.id;
    return a.instance < b.instance;
  });
  return out;
}

double compute_lmf(std::span<const double> initial, std::span<const double> final_masses) {
  if (initial.empty()) throw EmptyInput("LMF needs at least one internal component");
  if (initial.size() != final_masses.size()) throw DomainError("LMF mass lists differ in length");
  double m_in = 0.0, m_fin = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    m_in += initial[i];
    m_fin += final_masses[i];
  }
  if (!(m_in > 0)) throw DomainError("LMF needs a positive initial mass");
  return std::clamp(1.0 - m_fin / m_in, 0.0, 1.0);
}

double compute_lmf(const std::vector<FragmentResult>& fragments) {
  std::vector<double> m_in, m_fin;
  for (const auto& f : fragments) {
    if (!f.internal) continue;
    m_in.push_back(f.initial_mass * f.count);
    m_fin.push_back(f.final_mass * f.count);
  }
  return compute_lmf(m_in, m_fin);
}

}  // namespace dfd

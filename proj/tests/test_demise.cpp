#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dfd/demise.hpp"
#include "dfd/error.hpp"
#include "dfd/ini.hpp"
#include "support.hpp"

using namespace dfd;

namespace {

const Atmosphere& atmosphere() {
  static const Atmosphere atm = Atmosphere::load(dfd::testing::data_path("atmosphere.csv"));
  return atm;
}

TrajectoryState entry() {
  TrajectoryState s;
  s.altitude = 120000;
  s.velocity = 7800;
  s.flight_path_angle = 0.0;
  s.heading = -8.0 * std::numbers::pi / 180.0;
  return s;
}

// 2000 kg cube, 3 mm aluminium walls, one sphere tank of the given material.
SpacecraftConfig tank_config(const std::string& material, double r = 0.42, double t = 0.0029) {
  auto cfg = config_from_ini(IniDocument::parse(
      "[parent]\nmass = 2000\nrho_bar = 100\nmaterial = Al-6061-T6\nthickness = 0.003\n"));
  ComponentNode tank;
  tank.id = 10;
  tank.name = "tank";
  tank.kind = ComponentKind::Tank;
  tank.shape = SphereShape{r};
  tank.material = material;
  tank.wall_thickness = t;
  cfg.components.push_back(tank);
  return cfg;
}

MaterialDatabase with_extra(const MaterialRecord& extra) {
  auto records = dfd::testing::materials().records();
  records.push_back(extra);
  return MaterialDatabase(records);
}

}  // namespace

TEST_CASE("atmosphere table") {
  const auto& atm = atmosphere();
  CHECK(atm.density(0) == doctest::Approx(1.225));
  CHECK(atm.density(80000) == doctest::Approx(1.8458e-5));
  double mid = atm.density(75000);
  CHECK(mid == doctest::Approx(std::sqrt(8.2829e-5 * 1.8458e-5)));
  CHECK(atm.density(250000) < atm.density(200000));
  CHECK_THROWS_AS(Atmosphere::parse("altitude_m,density_kgm3\n0,1\n10,2\n"), InvariantError);
}

TEST_CASE("vacuum arc conserves energy") {
  auto vac = Atmosphere::constant(0.0);
  TrajectoryState s = entry();
  s.flight_path_angle = -0.05;
  auto energy = [](const TrajectoryState& x) {
    return x.velocity * x.velocity / 2 - kEarthMu / (kEarthRadius + x.altitude);
  };
  auto flat_energy = [](const TrajectoryState& x) { return x.velocity * x.velocity / 2 + 9.80665 * x.altitude; };
  double e0 = energy(s), f0 = flat_energy(s);
  for (int i = 0; i < 100; ++i) s = propagate_step(s, 100.0, 0.1, vac);
  CHECK(s.time == doctest::Approx(10.0));
  CHECK(std::abs(energy(s) - e0) / std::abs(e0) < 1e-6);
  CHECK(std::abs(flat_energy(s) - f0) / std::abs(f0) < 1e-4);
}

TEST_CASE("altitude decreases once the path angle is negative") {
  TrajectoryState s = entry();
  double prev = s.altitude;
  bool descending = false;
  for (int i = 0; i < 3000; ++i) {
    s = propagate_step(s, 150.0, 0.1, atmosphere());
    if (descending) CHECK(s.altitude < prev);
    if (s.flight_path_angle < 0) descending = true;
    prev = s.altitude;
  }
  CHECK(descending);
}

TEST_CASE("RK4 step halving converges at fourth order") {
  TrajectoryState s = entry();
  s.altitude = 70000;
  s.velocity = 6000;
  s.flight_path_angle = -0.2;
  const double beta = 80.0, dt = 2.0;
  auto run = [&](double h, int n) {
    TrajectoryState x = s;
    for (int i = 0; i < n; ++i) x = propagate_step(x, beta, h, atmosphere());
    return x;
  };
  auto ref = run(dt / 64, 64);
  double e1 = std::abs(run(dt, 1).velocity - ref.velocity);
  double e2 = std::abs(run(dt / 2, 2).velocity - ref.velocity);
  double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("heat flux correlation") {
  CHECK(heat_flux(0.0, 7500, 0.4163) == 0.0);
  CHECK(heat_flux(1e-5, 6000, 0.3) == doctest::Approx(8 * heat_flux(1e-5, 3000, 0.3)));
  double q = heat_flux(1.8e-5, 7500, 0.4163);
  CHECK(q == doctest::Approx(1.7415e-4 * std::sqrt(4.324e-5) * 4.219e11).epsilon(1e-3));
  CHECK(q == doctest::Approx(4.83e5).epsilon(2e-3));
}

TEST_CASE("nose radius by shape") {
  CHECK(nose_radius(SphereShape{0.3}, 0) == 0.3);
  CHECK(nose_radius(BoxShape{0.6, 0.4, 0.2}, 0) == doctest::Approx(0.1));
  CHECK(nose_radius(FlatPlateShape{1, 1}, 0.002) == doctest::Approx(0.01));
  CHECK(nose_radius(FlatPlateShape{1, 1}, 0.05) == doctest::Approx(0.025));
}

TEST_CASE("thermal update") {
  const auto& al = dfd::testing::materials().lookup("Al-6061-T6");
  ThermalState t{500.0, 1.0, 0.0};
  auto same = thermal_update(t, 0.0, al, 0.0, 0.1);
  CHECK(same.temperature == 500.0);
  CHECK(same.remaining_mass == 1.0);

  ThermalState hot{al.t_m, 3.0, 0.0};
  auto melted = thermal_update(hot, al.h_f, al, 0.0, 1.0);
  CHECK(melted.remaining_mass == doctest::Approx(2.0));
  CHECK(melted.temperature == al.t_m);

  ThermalState plate{867.0, 1.0, 0.0};
  double time = 0.0;
  while (plate.remaining_mass > 1e-9) {
    plate = thermal_update(plate, 386116.0, al, 0.0, 0.1);
    time += 0.1;
  }
  CHECK(time == doctest::Approx(1.0));

  ThermalState warm{300.0, 2.0, 0.0};
  auto heated = thermal_update(warm, 896.0 * 2.0 * 10.0, al, 0.0, 1.0);
  CHECK(heated.temperature == doctest::Approx(310.0));
  auto cooled = thermal_update(ThermalState{800.0, 1.0, 0.0}, 0.0, al, 1.0, 1.0);
  CHECK(cooled.temperature < 800.0);
}

TEST_CASE("LMF arithmetic") {
  std::vector<double> in{100, 50}, fin{0, 25};
  CHECK(compute_lmf(in, fin) == doctest::Approx(0.8333).epsilon(1e-4));
  std::vector<double> zero{0, 0};
  CHECK(compute_lmf(in, zero) == 1.0);
  CHECK(compute_lmf(in, in) == 0.0);
  std::vector<double> empty;
  CHECK_THROWS_AS(compute_lmf(empty, empty), EmptyInput);
}

TEST_CASE("unmeltable component survives intact") {
  MaterialRecord hard = dfd::testing::materials().lookup("Titanium 6Al4V");
  hard.name = "Unmeltable";
  hard.t_m = 1e9;
  auto db = with_extra(hard);
  auto cfg = tank_config("Unmeltable");
  auto res = simulate_reentry(cfg, entry(), ReentryEvents{}, db, atmosphere(), DemiseOptions{}, true);
  REQUIRE(res.fragments.size() >= 1);
  const auto& f = res.fragments.front();
  CHECK(f.internal);
  CHECK_FALSE(f.demised);
  CHECK(f.final_mass == f.initial_mass);
  CHECK(f.impact_energy.has_value());
  CHECK(compute_lmf(res.fragments) == 0.0);
}

TEST_CASE("forcing material demises right after breakup") {
  MaterialRecord soft = dfd::testing::materials().lookup("Al-6061-T6");
  soft.name = "Butter";
  soft.t_m = 300.0;
  soft.h_f = 1.0;
  auto db = with_extra(soft);
  auto cfg = tank_config("Butter");
  ReentryEvents ev;
  auto res = simulate_reentry(cfg, entry(), ev, db, atmosphere());
  const auto& f = res.fragments.front();
  CHECK(f.demised);
  REQUIRE(f.demise_altitude);
  CHECK(*f.demise_altitude < ev.breakup_altitude);
  CHECK(*f.demise_altitude > ev.breakup_altitude - 2000);
  CHECK(compute_lmf(res.fragments) == 1.0);
}

TEST_CASE("titanium keeps more mass than aluminium") {
  const auto& db = dfd::testing::materials();
  auto ti = simulate_reentry(tank_config("Titanium 6Al4V"), entry(), ReentryEvents{}, db, atmosphere());
  auto al = simulate_reentry(tank_config("Al-6061-T6"), entry(), ReentryEvents{}, db, atmosphere());
  double ti_frac = ti.fragments.front().final_mass / ti.fragments.front().initial_mass;
  double al_frac = al.fragments.front().final_mass / al.fragments.front().initial_mass;
  CHECK(ti_frac > al_frac);
  CHECK(compute_lmf(al.fragments) > compute_lmf(ti.fragments));
}

TEST_CASE("fragment mass never increases") {
  const auto& db = dfd::testing::materials();
  auto cfg = tank_config("Al-6061-T6", 0.3, 0.001);
  ComponentNode box;
  box.id = 11;
  box.name = "box";
  box.shape = BoxShape{0.6, 0.4, 0.4};
  box.material = "Al-6061-T6";
  box.wall_thickness = 0.003;
  box.position = Vec3(0.8, 0, 0);
  cfg.components.push_back(box);
  ComponentNode cell;
  cell.id = 12;
  cell.parent_id = 11;
  cell.name = "cell";
  cell.shape = BoxShape{0.21, 0.11, 0.076};
  cell.material = "Al-6061-T6";
  cell.thermal_mass = 2.2;
  cell.quantity = 5;
  cfg.components.push_back(cell);
  auto res = simulate_reentry(cfg, entry(), ReentryEvents{}, db, atmosphere(), DemiseOptions{}, true);
  int internal = 0;
  for (const auto& f : res.fragments) {
    for (std::size_t i = 1; i < f.mass_history.size(); ++i) CHECK(f.mass_history[i] <= f.mass_history[i - 1]);
    CHECK(f.absorbed_heat <= f.incident_heat + 1e-6);
    if (f.internal) ++internal;
    if (f.id == 12) CHECK(f.count == 5);
  }
  CHECK(internal == 3);
  CHECK(res.panel_detachments.size() <= 6);
}

TEST_CASE("panel melt releases attached components before breakup") {
  const auto& db = dfd::testing::materials();
  auto cfg = tank_config("Al-6061-T6");
  for (auto& p : cfg.panels) p.face_thickness = 0.0002;
  ComponentNode payload;
  payload.id = 15;
  payload.name = "payload";
  payload.parent_id = panel_id(PanelRole::Earth);
  payload.shape = BoxShape{1.0, 0.6, 0.6};
  payload.material = "Al-6061-T6";
  payload.wall_thickness = 0.003;
  cfg.components.push_back(payload);
  ReentryEvents ev;
  auto res = simulate_reentry(cfg, entry(), ev, db, atmosphere());
  REQUIRE_FALSE(res.panel_detachments.empty());
  for (const auto& f : res.fragments) {
    if (f.id == 15 && f.internal) CHECK(f.release_altitude > ev.breakup_altitude);
  }
}

TEST_CASE("fragment results are independent of component order") {
  const auto& db = dfd::testing::materials();
  auto cfg = tank_config("Al-6061-T6");
  ComponentNode other = cfg.components[0];
  other.id = 11;
  other.shape = SphereShape{0.2};
  other.position = Vec3(0.8, 0, 0);
  cfg.components.push_back(other);
  ReentryEvents ev;
  ev.panel_detach = false;
  auto a = simulate_reentry(cfg, entry(), ev, db, atmosphere());
  std::swap(cfg.components[0], cfg.components[1]);
  auto b = simulate_reentry(cfg, entry(), ev, db, atmosphere());
  REQUIRE(a.fragments.size() == b.fragments.size());
  for (std::size_t i = 0; i < a.fragments.size(); ++i) {
    CHECK(a.fragments[i].id == b.fragments[i].id);
    CHECK(a.fragments[i].final_mass == b.fragments[i].final_mass);
  }
}

TEST_CASE("entry below breakup is a configuration error") {
  auto s = entry();
  s.altitude = 70000;
  CHECK_THROWS_AS(simulate_reentry(tank_config("Al-6061-T6"), s, ReentryEvents{}, dfd::testing::materials(),
                                   atmosphere()),
                  ConfigError);
}

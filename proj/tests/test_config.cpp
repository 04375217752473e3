#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dfd/config.hpp"
#include "dfd/error.hpp"
#include "dfd/ini.hpp"
#include "support.hpp"

using namespace dfd;

namespace {

const char* kFourNode = R"(
[parent]
name = Spacecraft
mass = 2000
l = 3.5
w = 1.5
h = 1.5
material = Al-6061-T6
thickness = 0.003

[component.tank]
id = 1
name = Tank
parent = 0
shape = sphere
r = 0.55
mass = 15
material = Titanium 6Al4V

[component.battbox]
id = 2
name = BattBox
parent = 0
shape = box
l = 0.6
w = 0.5
h = 0.4
mass = 5
material = Al-6061-T6

[component.battcell]
id = 3
name = BattCell
parent = 2
shape = box
l = 0.1
w = 0.05
h = 0.04
mass = 1
quantity = 20
material = Al-6061-T6
)";

SpacecraftConfig four_node() { return config_from_ini(IniDocument::parse(kFourNode)); }

}  // namespace

TEST_CASE("the four-node example loads as a valid four-node configuration") {
  auto cfg = four_node();
  CHECK_NOTHROW(validate_config(cfg, dfd::testing::materials()));
  CHECK(cfg.components.size() == 3);
  CHECK(cfg.panels.size() == 6);
  const auto* cell = cfg.find_component(3);
  REQUIRE(cell);
  CHECK(cell->quantity == 20);
  CHECK(hierarchy_depth(cfg, *cell) == 2);
  CHECK_FALSE(attached_panel(cfg, *cell).has_value());
  CHECK_FALSE(is_top_level(cfg, *cell));
  CHECK(aero_mass(cfg, *cfg.find_component(2), dfd::testing::materials()) == doctest::Approx(25));
}

TEST_CASE("missing Earth panel is a broken hierarchy") {
  auto cfg = four_node();
  std::erase_if(cfg.panels, [](const PanelSpec& p) { return p.role == PanelRole::Earth; });
  CHECK_THROWS_AS(validate_config(cfg, dfd::testing::materials()), BrokenHierarchy);
}

TEST_CASE("self parent is a broken hierarchy") {
  auto cfg = four_node();
  cfg.find_component(2)->parent_id = 2;
  CHECK_THROWS_AS(validate_config(cfg, dfd::testing::materials()), BrokenHierarchy);
}

TEST_CASE("dangling parent and unknown material") {
  auto cfg = four_node();
  cfg.find_component(3)->parent_id = 42;
  CHECK_THROWS_AS(validate_config(cfg, dfd::testing::materials()), BrokenHierarchy);
  cfg = four_node();
  cfg.find_component(1)->material = "Unobtanium";
  CHECK_THROWS_AS(validate_config(cfg, dfd::testing::materials()), UnknownMaterial);
}

TEST_CASE("derive_side_length") {
  CHECK(derive_side_length(2000, 100) == doctest::Approx(2.7144).epsilon(1e-4));
  CHECK(derive_side_length(100, 100) == doctest::Approx(1.0));
  CHECK(derive_side_length(3000, 100) == doctest::Approx(3.1072).epsilon(1e-4));
  CHECK(derive_side_length(8 * 700, 50) == doctest::Approx(2 * derive_side_length(700, 50)));
  CHECK_THROWS_AS(derive_side_length(0, 100), DomainError);
  CHECK_THROWS_AS(derive_side_length(100, -1), DomainError);
}

TEST_CASE("component_mass") {
  const auto& db = dfd::testing::materials();
  ComponentNode shell;
  shell.shape = SphereShape{0.4163};
  shell.wall_thickness = 0.003;
  shell.material = "Al-6061-T6";
  double expect = 4 * std::numbers::pi * 0.4163 * 0.4163 * 0.003 * 2713;
  CHECK(component_mass(shell, db) == doctest::Approx(expect));
  CHECK(component_mass(shell, db) == doctest::Approx(17.72).epsilon(1e-3));

  ComponentNode given;
  given.thermal_mass = 2.2;
  given.material = "Al-6061-T6";
  CHECK(component_mass(given, db) == 2.2);

  ComponentNode bare;
  bare.material = "Al-6061-T6";
  CHECK_THROWS_AS(component_mass(bare, db), MissingData);
}

TEST_CASE("panel mass by wall type") {
  const auto& db = dfd::testing::materials();
  PanelSpec p;
  p.material = "Al-6061-T6";
  p.face_thickness = 0.001;
  p.l = 2;
  p.w = 1;
  CHECK(panel_mass(p, db) == doctest::Approx(5.426));
  p.wall_type = WallType::HoneycombSandwich;
  p.hc_thickness = 0.02;
  p.hc_areal_density = 0.5;
  CHECK(panel_mass(p, db) == doctest::Approx(2 * 5.426 + 1.0));
}

TEST_CASE("attached components sit flush inside their panel") {
  auto cfg = four_node();
  ComponentNode box;
  box.id = 9;
  box.parent_id = panel_id(PanelRole::Space);
  box.shape = BoxShape{0.2, 0.2, 0.2};
  box.material = "Al-6061-T6";
  box.thermal_mass = 1;
  box.position = Vec3(0.5, -0.25, 0);
  cfg.components.push_back(box);
  Vec3 p = body_position(cfg, cfg.components.back());
  CHECK(p.x() == doctest::Approx(0.5));
  CHECK(p.y() == doctest::Approx(-0.25));
  CHECK(p.z() == doctest::Approx(0.75 - 0.1));
}

TEST_CASE("serializer round trip") {
  auto cfg = four_node();
  IniDocument doc;
  config_to_ini(cfg, doc);
  auto back = config_from_ini(IniDocument::parse(doc.dump()));
  CHECK(back == cfg);
}

TEST_CASE("side length from rho_bar") {
  auto cfg = config_from_ini(IniDocument::parse(
      "[parent]\nmass = 2000\nrho_bar = 100\nmaterial = Al-6061-T6\nthickness = 0.003\n"));
  CHECK(cfg.parent_dims().x() == doctest::Approx(2.7144).epsilon(1e-4));
  CHECK(cfg.panel(PanelRole::Ram).face_thickness == 0.003);
}

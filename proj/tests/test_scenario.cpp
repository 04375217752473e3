#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dfd/error.hpp"
#include "dfd/scenario.hpp"
#include "dfd/text.hpp"
#include "support.hpp"

using namespace dfd;
using dfd::testing::scenario_path;
namespace fs = std::filesystem;

namespace {

/// Copy of a bundled scenario with text substitutions, in a scratch folder.
std::string edited(const std::string& name, const std::vector<std::pair<std::string, std::string>>& subs) {
  auto txt = text::read_file(scenario_path(name));
  for (const auto& [from, to] : subs) {
    auto at = txt.find(from);
    REQUIRE_MESSAGE(at != std::string::npos, from);
    txt.replace(at, from.size(), to);
  }
  auto dir = fs::temp_directory_path() / "dfd_test_scenario";
  fs::create_directories(dir);
  auto path = (dir / ("edited_" + name)).string();
  std::ofstream(path) << txt;
  return path;
}

bool mentions(const ScenarioReport& r, const std::string& what) {
  for (const auto& d : r.diagnostics) {
    if (d.message.find(what) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("bundled scenarios load cleanly") {
  for (const char* name : {"tank_assembly.ini", "tank_discrete.ini", "leo_spacecraft.ini", "leo_best_pnp.ini"}) {
    auto r = inspect_scenario(scenario_path(name));
    for (const auto& d : r.diagnostics) MESSAGE(name << ": " << d.message);
    CHECK(r.diagnostics.empty());
    CHECK(r.scenario);
  }
}

TEST_CASE("scenario values are read from every section") {
  auto sc = load_scenario(scenario_path("leo_spacecraft.ini"));
  REQUIRE(sc.mission.tank);
  CHECK(sc.mission.tank->m_f == 220);
  CHECK(sc.mission.tank->rho_f == 1020);
  CHECK(sc.mission.tank->p == 4e6);
  REQUIRE(sc.mission.rw);
  CHECK(sc.mission.rw->omega_max == doctest::Approx(5000 * 2 * 3.141592653589793 / 60));
  REQUIRE(sc.mission.battery);
  CHECK(sc.mission.battery->t_e == doctest::Approx(35.13 / 60));
  CHECK(sc.mission.entry.altitude == 120000);
  CHECK(sc.mission.entry.heading == doctest::Approx(-8 * 3.141592653589793 / 180));
  CHECK(sc.survivability.transparent_missing_ble);
  CHECK(sc.ga.population_size == 120);
  CHECK(sc.ga.generations == 100);
  CHECK(sc.genes.size() == 34);
  CHECK(sc.environment.elements.size() == 84);
  CHECK(sc.data_files.size() == 4);
  for (const auto& [role, file] : sc.data_files) CHECK(fs::path(file).is_absolute());
}

TEST_CASE("overrides change scenario values") {
  auto sc = load_scenario(scenario_path("tank_assembly.ini"), {"ga.seed=99", "mission.m_f=110", "ga.pop=10"});
  CHECK(sc.ga.seed == 99);
  CHECK(sc.ga.population_size == 10);
  CHECK(sc.mission.tank->m_f == 110);
  CHECK_THROWS_AS(load_scenario(scenario_path("tank_assembly.ini"), {"nonsense"}), ParseError);
}

TEST_CASE("a missing mission key is named in the diagnostics") {
  auto r = inspect_scenario(edited("tank_assembly.ini", {{"p_max = 4e6\n", ""}}));
  CHECK_FALSE(r.scenario);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].stage == "mission");
  CHECK(mentions(r, "[mission] p_max"));
}

TEST_CASE("an unknown material is named in the diagnostics") {
  auto r = inspect_scenario(edited("tank_assembly.ini", {{"material = Titanium 6Al4V", "material = Unobtainium"}}));
  CHECK_FALSE(r.scenario);
  CHECK(mentions(r, "Unobtainium"));
}

TEST_CASE("every problem is reported, not only the first") {
  auto r = inspect_scenario(edited("leo_spacecraft.ini", {{"p_max = 4e6\n", ""},
                                                          {"h_d = 85\n", ""},
                                                          {"pop = 120", "pop = 1"},
                                                          {"material = AISI316", "material = Kryptonite"}}));
  CHECK(mentions(r, "Kryptonite"));
  CHECK(mentions(r, "pop"));
  CHECK(r.diagnostics.size() >= 2);
}

TEST_CASE("missing data files are I/O failures") {
  auto r = inspect_scenario(edited("tank_assembly.ini", {{"flux = flux_sso802_synthetic.csv", "flux = nowhere.csv"}}));
  CHECK(r.io_failure);
  CHECK(mentions(r, "nowhere.csv"));
  auto gone = inspect_scenario("/nonexistent/scenario.ini");
  CHECK(gone.io_failure);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), IoError);
}

TEST_CASE("data paths resolve against the scenario folder, then the data root") {
  auto bundled = fs::path(DFD_SOURCE_DATA_DIR) / "materials.csv";
  CHECK(resolve_data_path("materials.csv", "/nonexistent") == fs::absolute(bundled).lexically_normal().string());
  CHECK(resolve_data_path(bundled.string(), "/elsewhere") == bundled.lexically_normal().string());
  auto dir = fs::temp_directory_path() / "dfd_test_scenario" / "local";
  fs::create_directories(dir);
  std::ofstream(dir / "materials.csv") << "x";
  CHECK(resolve_data_path("materials.csv", dir.string()) == (dir / "materials.csv").string());
  CHECK_THROWS_AS(resolve_data_path("nope.csv", dir.string()), IoError);
}

TEST_CASE("invalid GA and survivability settings are rejected") {
  CHECK_THROWS_AS(load_scenario(scenario_path("tank_assembly.ini"), {"ga.pc=1.5"}), InvariantError);
  CHECK_THROWS_AS(load_scenario(scenario_path("tank_assembly.ini"), {"ga.seed=-1"}), ParseError);
  CHECK_THROWS_AS(load_scenario(scenario_path("tank_assembly.ini"), {"survivability.pnp_mode=mean"}), ParseError);
  CHECK_THROWS_AS(load_scenario(scenario_path("tank_assembly.ini"), {"survivability.attenuation=0"}),
                  InvariantError);
  auto sc = load_scenario(scenario_path("tank_assembly.ini"), {"survivability.pnp_mode=product"});
  CHECK(sc.survivability.product_pnp);
}

TEST_CASE("a scenario rewritten with its own configuration loads back identically") {
  auto sc = load_scenario(scenario_path("leo_spacecraft.ini"));
  auto dir = fs::temp_directory_path() / "dfd_test_scenario";
  fs::create_directories(dir);
  auto path = (dir / "rewritten.ini").string();
  std::ofstream(path) << scenario_with_config(sc, sc.config);
  auto back = load_scenario(path);
  CHECK(back.genes == sc.genes);
  CHECK(back.data_files == sc.data_files);
  std::string a = scenario_with_config(sc, sc.config), b = scenario_with_config(back, back.config);
  CHECK(a == b);
}

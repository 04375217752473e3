#include "doctest.h"

#include <sstream>

#include "dfd/error.hpp"
#include "dfd/materials.hpp"
#include "support.hpp"

using namespace dfd;
using dfd::testing::data_path;

namespace {
const char* kHeader = "name,rho,hb,tm,hf,cm,eps,c,sigma_y,sigma_u,nu\n";
}

TEST_CASE("Al-6061-T6 row") {
  const auto& m = dfd::testing::materials().lookup("Al-6061-T6");
  CHECK(m.rho_m == 2713);
  CHECK(*m.hb == 95);
  CHECK(m.t_m == 867);
  CHECK(m.h_f == 386116);
  CHECK(m.c_m == 896);
  CHECK(m.epsilon == doctest::Approx(0.141));
  CHECK(*m.c_sound == 5100);
  CHECK(m.sigma_y == 276e6);
  CHECK(m.ultimate_strength() == 276e6);
  CHECK(m.poisson_ratio() == doctest::Approx(0.33));
}

TEST_CASE("Titanium, AISI316, Inconel rows") {
  const auto& db = dfd::testing::materials();
  CHECK(db.size() == 8);
  const auto& ti = db.lookup("Titanium 6Al4V");
  CHECK(ti.rho_m == 4437);
  CHECK(ti.t_m == 1943);
  CHECK(ti.sigma_y == 880e6);
  CHECK(db.lookup("AISI316").rho_m == doctest::Approx(8026.85));
  CHECK(db.lookup("AISI316").sigma_y == 250e6);
  CHECK(db.lookup("Inconel-601").t_m == 1659);
  CHECK(db.lookup("AISI304").epsilon == doctest::Approx(0.35));
  CHECK_FALSE(db.lookup("Graphite-epoxy 1").hb.has_value());
  CHECK_FALSE(db.lookup("Graphite-epoxy 1").c_sound.has_value());
}

TEST_CASE("lookup of an absent name throws NotFound") {
  CHECK_THROWS_AS(dfd::testing::materials().lookup("Unobtanium"), NotFound);
}

TEST_CASE("invariant violations") {
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,2700,95,867,386116,896,0,5100,276e6,,\n"),
                  InvariantError);
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,-1,95,867,386116,896,0.1,5100,276e6,,\n"),
                  InvariantError);
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,2700,95,867,386116,896,0.1,5100,276e6,200e6,\n"),
                  InvariantError);
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,2700,95,867,386116,896,0.1,5100,276e6,,0.5\n"),
                  InvariantError);
}

TEST_CASE("malformed rows and duplicates") {
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,abc,95,867,386116,896,0.1,5100,276e6,,\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,2700,95\n"), ParseError);
  CHECK_THROWS_AS(parse_materials(std::string(kHeader) + "X,2700,95,867,386116,896,0.1,5100,276e6,,\n" +
                                  "X,2700,95,867,386116,896,0.1,5100,276e6,,\n"),
                  DuplicateName);
}

TEST_CASE("round trip through the CSV writer") {
  const auto& db = dfd::testing::materials();
  std::ostringstream os;
  write_materials(os, db);
  CHECK(parse_materials(os.str()) == db);
}

TEST_CASE("graphite-epoxy 2 heat of fusion is flagged") {
  auto w = dfd::testing::materials().warnings();
  bool flagged = false;
  for (const auto& s : w)
    if (s.find("Graphite-epoxy 2") != std::string::npos) flagged = true;
  CHECK(flagged);
}

TEST_CASE("battery catalogue") {
  auto cat = load_battery_catalogue(data_path("batteries.csv"));
  CHECK(cat.cells().size() == 5);
  const auto& c0 = cat.lookup(0);
  CHECK(c0.mass == doctest::Approx(0.38));
  CHECK(c0.shape == CellShape::Box);
  CHECK(c0.l == doctest::Approx(0.088));
  CHECK(c0.w == doctest::Approx(0.055));
  CHECK(c0.h == doctest::Approx(0.039));
  const auto& c1 = cat.lookup(1);
  CHECK(c1.mass == doctest::Approx(1.15));
  CHECK(c1.shape == CellShape::Cylinder);
  CHECK(c1.l == doctest::Approx(0.245));
  CHECK(c1.diameter == doctest::Approx(0.054));
  const auto& c3 = cat.lookup(3);
  CHECK(c3.mass == doctest::Approx(2.2));
  CHECK(c3.l == doctest::Approx(0.210));
  CHECK(c3.w == doctest::Approx(0.110));
  CHECK(c3.h == doctest::Approx(0.076));
  CHECK_THROWS_AS(cat.lookup(9), NotFound);
  CHECK_THROWS_AS(parse_battery_catalogue("id,mass,shape,l,w,h,diameter\n0,1,box,1,1,1,\n0,1,box,1,1,1,\n"),
                  DuplicateId);
}

TEST_CASE("chemistry by casing") {
  auto chems = builtin_chemistries();
  const auto& li = chemistry_for_casing(chems, "Al-6061-T6");
  CHECK(li.energy_density == 140);
  CHECK(li.dod == doctest::Approx(0.2));
  const auto& nicd = chemistry_for_casing(chems, "AISI316");
  CHECK(nicd.energy_density == 60);
  CHECK(nicd.dod == doctest::Approx(0.6));
  CHECK_THROWS_AS(chemistry_for_casing(chems, "Inconel-601"), NotFound);
}

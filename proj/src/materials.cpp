#include "dfd/materials.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace {

constexpr const char* kMaterialHeader = "name,rho,hb,tm,hf,cm,eps,c,sigma_y,sigma_u,nu";
constexpr const char* kBatteryHeader = "id,mass,shape,l,w,h,diameter";

void require(bool ok, const std::string& material, const std::string& what) {
  if (!ok) throw InvariantError("material '" + material + "': " + what);
}

void check_header(const std::vector<std::string>& header, const char* expected,
                  const std::string& file_kind) {
  auto want = text::split(expected, ',');
  if (header != want) {
    throw ParseError(file_kind + " header must be '" + expected + "'");
  }
}

std::string opt_field(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string{};
}

}  // namespace

void validate(const MaterialRecord& m) {
  require(!m.name.empty(), m.name, "empty name");
  require(m.rho_m > 0, m.name, "rho must be > 0");
  require(m.t_m > 0, m.name, "tm must be > 0");
  require(m.h_f > 0, m.name, "hf must be > 0");
  require(m.c_m > 0, m.name, "cm must be > 0");
  require(m.sigma_y > 0, m.name, "sigma_y must be > 0");
  require(m.epsilon > 0 && m.epsilon <= 1, m.name, "eps must lie in (0, 1]");
  if (m.hb) require(*m.hb > 0, m.name, "hb must be > 0");
  if (m.c_sound) require(*m.c_sound > 0, m.name, "c must be > 0");
  if (m.sigma_u) require(*m.sigma_u >= m.sigma_y, m.name, "sigma_u must be >= sigma_y");
  if (m.nu) require(*m.nu > 0 && *m.nu < 0.5, m.name, "nu must lie in (0, 0.5)");
}

MaterialDatabase::MaterialDatabase(std::vector<MaterialRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate(records_[i]);
    if (!index_.emplace(records_[i].name, i).second) {
      throw DuplicateName("material '" + records_[i].name + "' defined twice");
    }
  }
}

const MaterialRecord& MaterialDatabase::lookup(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw NotFound("material '" + name + "' not in database");
  return records_[it->second];
}

std::vector<std::string> MaterialDatabase::warnings() const {
  std::vector<std::string> out;
  for (const auto& m : records_) {
    // Latent heats of structural materials are O(1e5) J/kg or more.
    if (m.h_f < 1.0e3) {
      out.push_back("material '" + m.name + "': heat of fusion " + text::format_double(m.h_f) +
                    " J/kg is implausibly small");
    }
    if (!m.hb || !m.c_sound) {
      out.push_back("material '" + m.name +
                    "': no hardness/speed of sound, unusable as an impact wall");
    }
  }
  return out;
}

MaterialDatabase parse_materials(const std::string& csv_content) {
  auto rows = text::parse_csv(csv_content);
  if (rows.empty()) throw ParseError("materials file is empty");
  check_header(rows.front(), kMaterialHeader, "materials");

  std::vector<MaterialRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 11) {
      throw ParseError("materials row " + std::to_string(r + 1) + ": expected 11 fields, got " +
                       std::to_string(f.size()));
    }
    MaterialRecord m;
    m.name = f[0];
    auto ctx = [&](const char* col) { return "materials '" + m.name + "' column " + col; };
    m.rho_m = text::to_double(f[1], ctx("rho"));
    m.hb = text::to_optional_double(f[2], ctx("hb"));
    m.t_m = text::to_double(f[3], ctx("tm"));
    m.h_f = text::to_double(f[4], ctx("hf"));
    m.c_m = text::to_double(f[5], ctx("cm"));
    m.epsilon = text::to_double(f[6], ctx("eps"));
    m.c_sound = text::to_optional_double(f[7], ctx("c"));
    m.sigma_y = text::to_double(f[8], ctx("sigma_y"));
    m.sigma_u = text::to_optional_double(f[9], ctx("sigma_u"));
    m.nu = text::to_optional_double(f[10], ctx("nu"));
    records.push_back(std::move(m));
  }
  return MaterialDatabase(std::move(records));
}

MaterialDatabase load_materials(const std::string& path) { return parse_materials(text::read_file(path)); }

void write_materials(std::ostream& os, const MaterialDatabase& db) {
  os << kMaterialHeader << '\n';
  for (const auto& m : db.records()) {
    os << m.name << ',' << text::format_double(m.rho_m) << ',' << opt_field(m.hb) << ','
       << text::format_double(m.t_m) << ',' << text::format_double(m.h_f) << ','
       << text::format_double(m.c_m) << ',' << text::format_double(m.epsilon) << ','
       << opt_field(m.c_sound) << ',' << text::format_double(m.sigma_y) << ','
       << opt_field(m.sigma_u) << ',' << opt_field(m.nu) << '\n';
  }
}

BatteryCatalogue::BatteryCatalogue(std::vector<BatteryCellRecord> cells) : cells_(std::move(cells)) {
  std::set<int> seen;
  for (const auto& c : cells_) {
    if (!seen.insert(c.cell_id).second) {
      throw DuplicateId("battery cell id " + std::to_string(c.cell_id) + " defined twice");
    }
    auto bad = [&](const std::string& what) {
      return InvariantError("battery cell " + std::to_string(c.cell_id) + ": " + what);
    };
    if (!(c.mass > 0)) throw bad("mass must be > 0");
    if (!(c.l > 0)) throw bad("l must be > 0");
    if (c.shape == CellShape::Box && !(c.w > 0 && c.h > 0)) throw bad("box needs w, h > 0");
    if (c.shape == CellShape::Cylinder && !(c.diameter > 0)) throw bad("cylinder needs diameter > 0");
  }
}

const BatteryCellRecord& BatteryCatalogue::lookup(int cell_id) const {
  for (const auto& c : cells_) {
    if (c.cell_id == cell_id) return c;
  }
  throw NotFound("battery cell id " + std::to_string(cell_id) + " not in catalogue");
}

BatteryCatalogue parse_battery_catalogue(const std::string& csv_content) {
  auto rows = text::parse_csv(csv_content);
  if (rows.empty()) throw ParseError("battery catalogue is empty");
  check_header(rows.front(), kBatteryHeader, "batteries");

  std::vector<BatteryCellRecord> cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 7) {
      throw ParseError("batteries row " + std::to_string(r + 1) + ": expected 7 fields");
    }
    BatteryCellRecord c;
    c.cell_id = static_cast<int>(text::to_long(f[0], "batteries id"));
    c.mass = text::to_double(f[1], "batteries mass");
    auto shape = text::lower(f[2]);
    if (shape == "box") {
      c.shape = CellShape::Box;
    } else if (shape == "cylinder") {
      c.shape = CellShape::Cylinder;
    } else {
      throw ParseError("batteries row " + std::to_string(r + 1) + ": unknown shape '" + f[2] + "'");
    }
    c.l = text::to_double(f[3], "batteries l");
    c.w = text::to_optional_double(f[4], "batteries w").value_or(0.0);
    c.h = text::to_optional_double(f[5], "batteries h").value_or(0.0);
    c.diameter = text::to_optional_double(f[6], "batteries diameter").value_or(0.0);
    cells.push_back(c);
  }
  return BatteryCatalogue(std::move(cells));
}

BatteryCatalogue load_battery_catalogue(const std::string& path) {
  return parse_battery_catalogue(text::read_file(path));
}

std::vector<BatteryChemistry> builtin_chemistries() {
  return {
      {"Li-ion", 140.0, 0.2, "Al-6061-T6"},
      {"Ni-Cd", 60.0, 0.6, "AISI316"},
  };
}

const BatteryChemistry& chemistry_for_casing(const std::vector<BatteryChemistry>& chems,
                                             const std::string& material) {
  for (const auto& c : chems) {
    if (c.casing_material == material) return c;
  }
  throw NotFound("no battery chemistry uses casing material '" + material + "'");
}

}  // namespace dfd

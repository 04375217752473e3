#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dfd {

/// Thermo-physical and strength properties of one material, SI units.
struct MaterialRecord {
  std::string name;
  double rho_m = 0.0;                 // density, kg/m^3
  std::optional<double> hb;           // Brinell hardness
  double t_m = 0.0;                   // melting temperature, K
  double h_f = 0.0;                   // heat of fusion, J/kg
  double c_m = 0.0;                   // mean specific heat, J/(kg K)
  double epsilon = 0.0;               // emissivity
  std::optional<double> c_sound;      // speed of sound, m/s
  double sigma_y = 0.0;               // yield strength, Pa
  std::optional<double> sigma_u;      // ultimate strength, Pa
  std::optional<double> nu;           // Poisson ratio

  /// Ultimate strength used by the tank check; falls back to yield.
  double ultimate_strength() const { return sigma_u.value_or(sigma_y); }
  double poisson_ratio() const { return nu.value_or(0.33); }

  bool operator==(const MaterialRecord&) const = default;
};

/// Throws InvariantError naming the offending field.
void validate(const MaterialRecord& m);

/// Immutable, name-indexed material table.
class MaterialDatabase {
public:
  MaterialDatabase() = default;
  /// Validates every record; throws InvariantError / DuplicateName.
  explicit MaterialDatabase(std::vector<MaterialRecord> records);

  /// Throws NotFound; never returns a default.
  const MaterialRecord& lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  const std::vector<MaterialRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Non-fatal data-quality notes (e.g. implausible heat of fusion).
  std::vector<std::string> warnings() const;

  bool operator==(const MaterialDatabase& o) const { return records_ == o.records_; }

private:
  std::vector<MaterialRecord> records_;
  std::map<std::string, std::size_t> index_;
};

MaterialDatabase parse_materials(const std::string& csv_content);
MaterialDatabase load_materials(const std::string& path);
void write_materials(std::ostream& os, const MaterialDatabase& db);

enum class CellShape { Box, Cylinder };

struct BatteryCellRecord {
  int cell_id = 0;
  double mass = 0.0;       // kg
  CellShape shape = CellShape::Box;
  double l = 0.0;          // m
  double w = 0.0;          // m, box only
  double h = 0.0;          // m, box only
  double diameter = 0.0;   // m, cylinder only

  bool operator==(const BatteryCellRecord&) const = default;
};

class BatteryCatalogue {
public:
  BatteryCatalogue() = default;
  explicit BatteryCatalogue(std::vector<BatteryCellRecord> cells);

  const BatteryCellRecord& lookup(int cell_id) const;
  const std::vector<BatteryCellRecord>& cells() const { return cells_; }

private:
  std::vector<BatteryCellRecord> cells_;
};

BatteryCatalogue parse_battery_catalogue(const std::string& csv_content);
BatteryCatalogue load_battery_catalogue(const std::string& path);

struct BatteryChemistry {
  std::string name;
  double energy_density = 0.0;  // Wh/kg
  double dod = 0.0;             // depth of discharge
  std::string casing_material;
};

/// Li-ion (140 Wh/kg, DOD 0.2, aluminium casing) and Ni-Cd (60 Wh/kg,
/// DOD 0.6, stainless casing).
std::vector<BatteryChemistry> builtin_chemistries();

/// Chemistry whose casing material is `material`; NotFound otherwise.
const BatteryChemistry& chemistry_for_casing(const std::vector<BatteryChemistry>& chems,
                                             const std::string& material);

}  // namespace dfd

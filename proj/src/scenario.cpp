#include "dfd/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace fs = std::filesystem;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const char* kDataRoles[] = {"materials", "batteries", "atmosphere", "flux"};

bool has_kind(const SpacecraftConfig& cfg, ComponentKind k) {
  for (const auto& c : cfg.components) {
    if (c.kind == k) return true;
  }
  return false;
}

bool parse_bool(const std::string& s, const std::string& what) {
  auto t = text::lower(text::trim(s));
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ParseError(what + ": expected true or false, got '" + s + "'");
}

class Collector {
public:
  explicit Collector(ScenarioReport* report) : report_(report) {}

  /// Runs `fn`; on failure records it (or rethrows when not collecting).
  bool stage(const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      if (!report_) throw;
      report_->diagnostics.push_back({name, e.kind(), e.what()});
      if (e.kind() == "IoError") report_->io_failure = true;
      return false;
    }
  }

  void add(const std::string& stage, const std::string& kind, const std::string& message) {
    if (!report_) throw ConfigError(message);
    report_->diagnostics.push_back({stage, kind, message});
  }

private:
  ScenarioReport* report_;
};

MissionParams read_mission(const IniSection& m, const SpacecraftConfig& cfg, Collector& col) {
  MissionParams out;
  auto require = [&](std::initializer_list<const char*> keys, const char* why) {
    bool ok = true;
    for (const char* k : keys) {
      if (!m.has(k)) {
        col.add("mission", "ParseError", std::string("[mission] ") + k + " is missing (needed by " + why + ")");
        ok = false;
      }
    }
    return ok;
  };

  if (has_kind(cfg, ComponentKind::Tank) && require({"m_f", "rho_f", "p_max", "sf", "k1"}, "the tank sizing")) {
    col.stage("mission", [&] {
      TankDesignParams t;
      t.m_f = m.get_double("m_f");
      t.rho_f = m.get_double("rho_f");
      t.p = m.get_double("p_max");
      t.sf = m.get_double("sf");
      t.k1 = m.get_double("k1");
      t.ar = m.get_double_or("ar_tank", 1.0);
      validate(t);
      out.tank = t;
    });
  }
  if (has_kind(cfg, ComponentKind::ReactionWheel) &&
      require({"h_d", "omega_max_rpm", "ar_rw"}, "the reaction wheel check")) {
    col.stage("mission", [&] {
      RwDesignParams r;
      r.h_d = m.get_double("h_d");
      r.omega_max = rpm_to_rad_per_s(m.get_double("omega_max_rpm"));
      r.ar = m.get_double("ar_rw");
      r.sf = m.has("sf_rw") ? m.get_double("sf_rw") : m.get_double_or("sf", 1.0);
      validate(r);
      out.rw = r;
    });
  }
  if (has_kind(cfg, ComponentKind::BatteryCell) && require({"t_e_min", "w_e"}, "the battery sizing")) {
    col.stage("mission", [&] {
      BatteryDesignParams b;
      b.t_e = m.get_double("t_e_min") / 60.0;
      b.w_e = m.get_double("w_e");
      b.eta = m.get_double_or("eta", 0.9);
      b.n_b = static_cast<int>(m.get_long_or("n_b", 1));
      validate(b);
      out.battery = b;
    });
  }
  col.stage("mission", [&] {
    out.entry.altitude = m.get_double_or("alt", 120000.0);
    out.entry.velocity = m.get_double_or("v", 7800.0);
    out.entry.flight_path_angle = m.get_double_or("fpa_deg", 0.0) * kDeg;
    out.entry.longitude = m.get_double_or("lon_deg", 0.0) * kDeg;
    out.entry.latitude = m.get_double_or("lat_deg", 0.0) * kDeg;
    out.entry.heading = m.get_double_or("heading_deg", -8.0) * kDeg;
    out.events.breakup_altitude = m.get_double_or("breakup_alt", 78000.0);
    if (m.has("solar_detach_alt")) out.events.solar_detach_altitude = m.get_double("solar_detach_alt");
    out.lifetime_years = m.get_double_or("lifetime_years", 10.0);
    if (!(out.entry.altitude > 0) || !(out.entry.velocity > 0)) {
      throw InvariantError("[mission] alt and v must be > 0");
    }
    if (!(out.lifetime_years > 0)) throw InvariantError("[mission] lifetime_years must be > 0");
    if (out.entry.altitude <= out.events.breakup_altitude) {
      throw InvariantError("[mission] entry altitude must lie above breakup_alt");
    }
  });
  return out;
}

GaParams read_ga(const IniSection* s) {
  GaParams g;
  if (!s) return g;
  g.population_size = static_cast<int>(s->get_long_or("pop", g.population_size));
  g.generations = static_cast<int>(s->get_long_or("gens", g.generations));
  g.p_crossover = s->get_double_or("pc", g.p_crossover);
  g.p_mutation = s->get_double_or("pm", g.p_mutation);
  g.eta_c = s->get_double_or("eta_c", g.eta_c);
  g.eta_m = s->get_double_or("eta_m", g.eta_m);
  g.init_attempt_factor = static_cast<int>(s->get_long_or("init_attempts", g.init_attempt_factor));
  if (auto seed = s->find("seed")) {
    try {
      std::size_t used = 0;
      g.seed = std::stoull(*seed, &used);
      if (used != seed->size() || seed->find('-') != std::string::npos) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw ParseError("[ga] seed must be a non-negative integer");
    }
  }
  validate(g);
  return g;
}

}  // namespace

void validate(const GaParams& p) {
  if (p.population_size < 2) throw InvariantError("[ga] pop must be >= 2");
  if (p.generations < 1) throw InvariantError("[ga] gens must be >= 1");
  if (p.p_crossover < 0 || p.p_crossover > 1) throw InvariantError("[ga] pc must lie in [0, 1]");
  if (p.p_mutation < 0 || p.p_mutation > 1) throw InvariantError("[ga] pm must lie in [0, 1]");
  if (!(p.eta_c >= 0) || !(p.eta_m >= 0)) throw InvariantError("[ga] eta_c and eta_m must be >= 0");
  if (p.init_attempt_factor < 1) throw InvariantError("[ga] init_attempts must be >= 1");
}

std::string resolve_data_path(const std::string& value, const std::string& scenario_dir) {
  fs::path p(value);
  if (p.is_absolute()) return p.lexically_normal().string();
  std::vector<fs::path> candidates{fs::path(scenario_dir) / p};
  if (const char* env = std::getenv("DFD_DATA_DIR"); env && *env) candidates.push_back(fs::path(env) / p);
#ifdef DFD_SOURCE_DATA_DIR
  candidates.push_back(fs::path(DFD_SOURCE_DATA_DIR) / p);
#endif
  for (const auto& c : candidates) {
    if (fs::exists(c)) return fs::absolute(c).lexically_normal().string();
  }
  std::string tried;
  for (const auto& c : candidates) tried += (tried.empty() ? "" : ", ") + c.string();
  throw IoError("data file '" + value + "' not found (tried " + tried + ")");
}

ScenarioReport inspect_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  ScenarioReport report;
  Collector col(&report);
  Scenario sc;
  sc.path = path;

  if (!col.stage("read", [&] { sc.doc = IniDocument::load(path); })) return report;
  for (const auto& o : overrides) col.stage("override", [&] { sc.doc.apply_override(o); });

  std::string dir = fs::absolute(fs::path(path)).parent_path().string();
  const auto* data = sc.doc.find("data");
  bool have_materials = false, have_cells = false;
  for (const char* role : kDataRoles) {
    std::string key = role;
    std::optional<std::string> value = data ? data->find(key) : std::nullopt;
    if (key == "flux" && (!value || text::trim(*value).empty())) continue;
    if (!value) value = key + ".csv";
    col.stage("data", [&] {
      auto file = resolve_data_path(*value, dir);
      sc.data_files[key] = file;
      if (key == "materials") {
        sc.materials = load_materials(file);
        have_materials = true;
      } else if (key == "batteries") {
        sc.cells = load_battery_catalogue(file);
        have_cells = true;
      } else if (key == "atmosphere") {
        sc.atmosphere = Atmosphere::load(file);
      } else {
        sc.environment = load_flux_table(file);
      }
    });
  }

  bool have_config = col.stage("config", [&] { sc.config = config_from_ini(sc.doc); });
  if (have_config && have_materials) {
    have_config = col.stage("config", [&] { validate_config(sc.config, sc.materials); });
  }

  if (have_config) {
    if (const auto* m = sc.doc.find("mission")) {
      sc.mission = read_mission(*m, sc.config, col);
    } else {
      IniSection empty("mission", {});
      sc.mission = read_mission(empty, sc.config, col);
    }
    if (have_cells) {
      for (const auto& c : sc.config.components) {
        if (c.kind != ComponentKind::BatteryCell) continue;
        col.stage("config", [&] {
          if (!c.catalogue_id) throw MissingData("battery cell '" + c.name + "' has no catalogue id (cell)");
          sc.cells.lookup(*c.catalogue_id);
          chemistry_for_casing(sc.chemistries, c.material);
        });
      }
    }
  }

  col.stage("survivability", [&] {
    auto& s = sc.survivability;
    s.lifetime_years = sc.mission.lifetime_years;
    const auto* sec = sc.doc.find("survivability");
    if (!sec) return;
    s.attenuation = sec->get_double_or("attenuation", s.attenuation);
    s.ble.spall_factor = sec->get_double_or("k", s.ble.spall_factor);
    s.ble.projectile_density = sec->get_double_or("projectile_density", s.ble.projectile_density);
    s.occlusion_samples = static_cast<int>(sec->get_long_or("occlusion_samples", s.occlusion_samples));
    auto mode = text::lower(sec->find("pnp_mode").value_or("sum"));
    if (mode != "sum" && mode != "product") throw ParseError("[survivability] pnp_mode must be sum or product");
    s.product_pnp = mode == "product";
    auto ble = text::lower(sec->find("ble_missing_data").value_or("reject"));
    if (ble != "reject" && ble != "transparent") {
      throw ParseError("[survivability] ble_missing_data must be reject or transparent");
    }
    s.transparent_missing_ble = ble == "transparent";
    if (!(s.attenuation > 0 && s.attenuation <= 1)) throw InvariantError("[survivability] attenuation must lie in (0, 1]");
    if (!(s.ble.spall_factor > 0) || !(s.ble.projectile_density > 0)) {
      throw InvariantError("[survivability] BLE coefficients must be positive");
    }
    if (s.occlusion_samples < 1) throw InvariantError("[survivability] occlusion_samples must be >= 1");
  });

  col.stage("placement", [&] {
    if (const auto* p = sc.doc.find("placement")) sc.grid_resolution = p->get_double_or("resolution", sc.grid_resolution);
    if (!(sc.grid_resolution > 0)) throw InvariantError("[placement] resolution must be > 0");
  });

  col.stage("demise", [&] {
    const auto* d = sc.doc.find("demise");
    if (!d) return;
    sc.demise.dt = d->get_double_or("dt", sc.demise.dt);
    if (auto v = d->find("panel_fragments")) sc.demise.track_panel_fragments = parse_bool(*v, "[demise] panel_fragments");
    if (!(sc.demise.dt > 0)) throw InvariantError("[demise] dt must be > 0");
  });

  col.stage("ga", [&] { sc.ga = read_ga(sc.doc.find("ga")); });

  if (col.stage("optimize", [&] { sc.genes = gene_specs_from_ini(sc.doc); }) && have_config && have_materials) {
    col.stage("optimize", [&] { validate_gene_specs(sc.genes, sc.config, sc.materials); });
  }

  if (report.diagnostics.empty()) report.scenario = std::move(sc);
  return report;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  auto report = inspect_scenario(path, overrides);
  if (report.scenario) return std::move(*report.scenario);
  const auto& d = report.diagnostics.front();
  std::string msg = d.message;
  if (d.kind == "IoError") throw IoError(msg);
  if (d.kind == "ParseError") throw ParseError(msg);
  if (d.kind == "UnknownMaterial") throw UnknownMaterial(msg);
  if (d.kind == "BrokenHierarchy") throw BrokenHierarchy(msg);
  if (d.kind == "InvariantError") throw InvariantError(msg);
  if (d.kind == "MissingData") throw MissingData(msg);
  if (d.kind == "NegativeFlux") throw NegativeFlux(msg);
  throw ConfigError(msg);
}

std::string scenario_with_config(const Scenario& scenario, const SpacecraftConfig& config) {
  IniDocument out;
  auto is_config = [](const std::string& n) {
    return n == "parent" || n.rfind("solar.", 0) == 0 || n.rfind("panel.", 0) == 0 || n.rfind("component.", 0) == 0;
  };
  IniSection data("data", {});
  for (const auto& [role, file] : scenario.data_files) data.set(role, file);
  out.add(std::move(data));
  for (const auto& s : scenario.doc.sections()) {
    if (s.name() == "data" || is_config(s.name())) continue;
    out.add(s);
  }
  config_to_ini(config, out);
  return out.dump();
}

}  // namespace dfd

#include "dfd/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dfd/error.hpp"
#include "dfd/evaluate.hpp"
#include "dfd/text.hpp"

namespace dfd::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) { return text::format_double(v); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  f.close();
  if (!f) throw IoError("cannot write '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

std::vector<std::string> overrides_of(const Options& opt) {
  auto o = opt.overrides;
  if (opt.seed) o.push_back("ga.seed=" + std::to_string(*opt.seed));
  return o;
}

void print_diagnostics(const ScenarioReport& r, std::ostream& err) {
  for (const auto& d : r.diagnostics) err << "error [" << d.stage << "] " << d.kind << ": " << d.message << "\n";
}

int failure_code(const ScenarioReport& r) { return r.io_failure ? kIo : kInvalid; }

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fragment_label(const std::string& name, int id, int instance) {
  return name + " (" + std::to_string(id) + "#" + std::to_string(instance) + ")";
}

}  // namespace

const char* version() { return DFD_VERSION; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("SHA-256 unavailable");
  char buf[1 << 16];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(f.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string pareto_csv(const Scenario& scenario, const RunResult& result, std::uint64_t seed) {
  std::string out = "# seed=" + std::to_string(seed) + "\nk";
  for (const auto& g : scenario.genes) out += "," + csv_field(g.label);
  out += ",lmf,pnp\n";
  for (std::size_t k = 0; k < result.front.size(); ++k) {
    const auto& s = result.front[k];
    out += std::to_string(k);
    for (std::size_t i = 0; i < scenario.genes.size(); ++i) {
      out += "," + csv_field(gene_value_string(scenario.genes[i], s.genome[i]));
    }
    out += "," + fmt(s.fitness.lmf) + "," + fmt(s.fitness.pnp) + "\n";
  }
  return out;
}

std::string history_csv(const RunResult& result, std::uint64_t seed) {
  std::string out = "# seed=" + std::to_string(seed) +
                    "\ngeneration,hypervolume,feasible,evaluated,front_size,best_lmf,best_pnp\n";
  for (const auto& h : result.history) {
    out += std::to_string(h.generation) + "," + fmt(h.hypervolume) + "," + std::to_string(h.feasible) + "," +
           std::to_string(h.evaluated) + "," + std::to_string(h.front_size) + "," + fmt(h.best_lmf) + "," +
           fmt(h.best_pnp) + "\n";
  }
  return out;
}

std::string evaluation_csv(const Evaluation& ev) {
  std::string out = "row,id,instance,name,count,initial_mass_kg,final_mass_kg,demised,demise_altitude_m,"
                    "expected_penetrations,probability\n";
  if (ev.reentry) {
    for (const auto& f : ev.reentry->fragments) {
      if (!f.internal) continue;
      out += "fragment," + std::to_string(f.id) + "," + std::to_string(f.instance) + "," + csv_field(f.name) + "," +
             std::to_string(f.count) + "," + fmt(f.initial_mass) + "," + fmt(f.final_mass) + "," +
             (f.demised ? "1" : "0") + "," + (f.demise_altitude ? fmt(*f.demise_altitude) : "") + ",,\n";
    }
  }
  for (const auto& p : ev.penetration) {
    std::string name;
    if (const auto* n = ev.realization.config.find_component(p.target_id)) name = n->name;
    out += "penetration," + std::to_string(p.target_id) + "," + std::to_string(p.instance) + "," + csv_field(name) +
           ",,,,,," + fmt(p.expected_penetrations) + "," + fmt(p.probability) + "\n";
  }
  return out;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  auto report = inspect_scenario(opt.scenario, overrides_of(opt));
  print_diagnostics(report, err);
  if (!report.scenario) return failure_code(report);
  const auto& sc = *report.scenario;
  auto real = realize(sc.config, sc, sc.genes);
  for (const auto& line : real.audit) out << "  " << line << "\n";
  if (real.dead) {
    err << "error [constraints] " << real.dead->reason << ": " << real.dead->detail << "\n";
    return kInvalid;
  }
  out << "ok: " << opt.scenario << ": " << sc.config.components.size() << " components, " << sc.genes.size()
      << " genes, " << sc.environment.elements.size() << " flux elements\n";
  return kOk;
}

int cmd_evaluate(const Options& opt, std::ostream& out, std::ostream& err) {
  auto report = inspect_scenario(opt.scenario, overrides_of(opt));
  print_diagnostics(report, err);
  if (!report.scenario) return failure_code(report);
  const auto& sc = *report.scenario;
  auto ev = evaluate_config(sc.config, sc, sc.genes);
  for (const auto& line : ev.realization.audit) out << "  " << line << "\n";

  if (ev.reentry) {
    out << "fragments:\n";
    for (const auto& f : ev.reentry->fragments) {
      if (!f.internal) continue;
      out << "  " << fragment_label(f.name, f.id, f.instance) << " x" << f.count << ": " << fmt(f.initial_mass)
          << " kg -> " << fmt(f.final_mass) << " kg";
      if (f.demise_altitude) out << ", demised at " << fmt(*f.demise_altitude / 1000) << " km";
      out << "\n";
    }
  }
  if (!ev.penetration.empty()) {
    out << "penetration:\n";
    for (const auto& p : ev.penetration) {
      const auto* n = ev.realization.config.find_component(p.target_id);
      out << "  " << fragment_label(n ? n->name : "?", p.target_id, p.instance) << ": N = "
          << fmt(p.expected_penetrations) << ", P = " << fmt(p.probability) << "\n";
    }
  }

  try {
    ensure_dir(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "evaluation.csv", evaluation_csv(ev));
  } catch (const IoError& e) {
    err << "error [output] " << e.what() << "\n";
    return kIo;
  }

  if (const auto* dead = std::get_if<Dead>(&ev.verdict)) {
    err << "dead: " << dead->reason << ": " << dead->detail << "\n";
    return kDead;
  }
  const auto& f = std::get<Fitness>(ev.verdict);
  out << "LMF = " << fmt(f.lmf) << "\nPNP = " << fmt(f.pnp) << (ev.pnp_clamped ? " (clamped)" : "") << "\n";
  return kOk;
}

int cmd_optimize(const Options& opt, std::ostream& out, std::ostream& err) {
  auto started = std::chrono::steady_clock::now();
  fs::path dir(opt.out_dir);
  json manifest;
  manifest["tool"] = "dfd";
  manifest["version"] = version();
  manifest["command"] = "optimize";
  manifest["scenario"] = fs::absolute(opt.scenario).lexically_normal().string();
  manifest["overrides"] = overrides_of(opt);
  manifest["workers"] = opt.workers;
  manifest["started_utc"] = utc_now();
  manifest["status"] = "running";

  auto write_manifest = [&] {
    manifest["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  };
  auto finish = [&](int code, const std::string& status, const std::string& message) -> int {
    manifest["status"] = status;
    manifest["exit_code"] = code;
    if (!message.empty()) manifest["error"] = message;
    try {
      write_manifest();
    } catch (const IoError& e) {
      err << "error [output] " << e.what() << "\n";
      return kIo;
    }
    return code;
  };

  try {
    ensure_dir(dir);
  } catch (const IoError& e) {
    err << "error [output] " << e.what() << "\n";
    return kIo;
  }

  auto report = inspect_scenario(opt.scenario, overrides_of(opt));
  print_diagnostics(report, err);
  if (!report.scenario) {
    std::string first = report.diagnostics.empty() ? "" : report.diagnostics.front().message;
    return finish(failure_code(report), "invalid", first);
  }
  const auto& sc = *report.scenario;
  auto params = sc.ga;
  manifest["seed"] = params.seed;
  manifest["ga"] = {{"pop", params.population_size}, {"gens", params.generations}, {"pc", params.p_crossover},
                    {"pm", params.p_mutation},        {"eta_c", params.eta_c},      {"eta_m", params.eta_m}};

  try {
    json digests = json::object();
    digests["scenario"] = {{"path", manifest["scenario"]}, {"sha256", sha256_file(opt.scenario)}};
    for (const auto& [role, file] : sc.data_files) digests[role] = {{"path", file}, {"sha256", sha256_file(file)}};
    manifest["inputs"] = digests;
    write_manifest();
  } catch (const IoError& e) {
    err << "error [input] " << e.what() << "\n";
    return finish(kIo, "failed", e.what());
  }

  RunOptions run;
  run.workers = opt.workers;
  if (!opt.quiet) {
    run.on_generation = [&](const GenerationStats& s) {
      out << "gen " << s.generation << ": hv " << fmt(s.hypervolume) << ", front " << s.front_size << ", feasible "
          << s.feasible << "/" << s.evaluated << "\n";
    };
  }

  RunResult result;
  try {
    result = run_nsga2(sc, params, run);
  } catch (const InitializationError& e) {
    err << "error [optimize] InitializationError: " << e.what() << "\n";
    return finish(kDead, "failed", e.what());
  } catch (const IoError& e) {
    err << "error [optimize] " << e.what() << "\n";
    return finish(kIo, "failed", e.what());
  } catch (const Error& e) {
    err << "error [optimize] " << e.kind() << ": " << e.what() << "\n";
    return finish(kInvalid, "failed", e.what());
  }

  try {
    write_file(dir / "pareto.csv", pareto_csv(sc, result, params.seed));
    write_file(dir / "history.csv", history_csv(result, params.seed));
    fs::path sol = dir / "solutions";
    fs::remove_all(sol);
    ensure_dir(sol);
    json outputs = json::array({"pareto.csv", "history.csv"});
    for (std::size_t k = 0; k < result.front.size(); ++k) {
      auto name = std::to_string(k) + ".cfg";
      write_file(sol / name, scenario_with_config(sc, *result.front[k].applied));
      outputs.push_back("solutions/" + name);
    }
    manifest["outputs"] = outputs;
  } catch (const IoError& e) {
    err << "error [output] " << e.what() << "\n";
    return finish(kIo, "failed", e.what());
  }
  manifest["evaluations"] = result.evaluations;
  manifest["cache_hits"] = result.cache_hits;
  manifest["front_size"] = result.front.size();

  out << result.front.size() << " Pareto solutions, " << result.evaluations << " distinct evaluations; written to "
      << dir.string() << "\n";
  return finish(kOk, "ok", "");
}

}  // namespace dfd::cli

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dfd/optimizer.hpp"
#include "dfd/scenario.hpp"

namespace dfd::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 2,
  kDead = 3,
  kIo = 4,
};

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_dir = "dfd-out";
  std::vector<std::string> overrides;  // section.key=value
  bool quiet = false;
};

/// Loads everything and checks the baseline configuration against the
/// component constraints. Prints one line per problem.
int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err);

/// Evaluates the baseline configuration; writes <out>/evaluation.csv.
int cmd_evaluate(const Options& opt, std::ostream& out, std::ostream& err);

/// Runs the optimiser; writes pareto.csv, history.csv, solutions/<k>.cfg and
/// manifest.json under <out>.
int cmd_optimize(const Options& opt, std::ostream& out, std::ostream& err);

/// `# seed=S` line, then k, one column per gene, lmf, pnp.
std::string pareto_csv(const Scenario& scenario, const RunResult& result, std::uint64_t seed);

/// generation, hypervolume, feasible, evaluated, front_size, best_lmf, best_pnp.
std::string history_csv(const RunResult& result, std::uint64_t seed);

/// One row per internal fragment and per top-level penetration target.
std::string evaluation_csv(const Evaluation& ev);

/// Lower-case hex SHA-256 of a file; throws IoError.
std::string sha256_file(const std::string& path);

/// CSV field, quoted when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

const char* version();

}  // namespace dfd::cli

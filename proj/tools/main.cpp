#include <iostream>

#include "CLI11.hpp"
#include "dfd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Design-for-demise trade tool: demisability vs debris survivability"};
  app.set_version_flag("--version", dfd::cli::version());
  app.require_subcommand(1);

  dfd::cli::Options opt;
  auto common = [&](CLI::App* sub, bool outputs) {
    sub->add_option("scenario", opt.scenario, "Scenario .ini file")->required();
    sub->add_option("--set", opt.overrides, "Override a scenario value (section.key=value), repeatable");
    if (outputs) {
      sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    }
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario and its baseline configuration");
  common(validate, false);
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate the baseline configuration");
  common(evaluate, true);
  auto* optimize = app.add_subcommand("optimize", "Run the NSGA-II trade");
  common(optimize, true);
  optimize->add_option("--seed", opt.seed, "Random seed (overrides [ga] seed)");
  optimize->add_option("--workers", opt.workers, "Parallel evaluations")->check(CLI::PositiveNumber)->capture_default_str();
  optimize->add_flag("--quiet", opt.quiet, "No per-generation progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dfd::cli::kInvalid;
  }

  try {
    if (*validate) return dfd::cli::cmd_validate(opt, std::cout, std::cerr);
    if (*evaluate) return dfd::cli::cmd_evaluate(opt, std::cout, std::cerr);
    return dfd::cli::cmd_optimize(opt, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dfd::cli::kInvalid;
  }
}

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cli/commands.hpp"
#include "cli/output.hpp"

namespace {

void add_common(CLI::App* cmd, saplab::cli::CommandOptions& opts) {
  cmd->add_option("--config", opts.config, "Experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "Output directory (default: results)");
  cmd->add_option("--seed", opts.seed, "Master seed");
  cmd->add_option("--trials", opts.trials, "Monte Carlo link observations");
  cmd->add_option("--variant", opts.variant, "Thinning exponent: linear | printed | both");
  cmd->add_option("--sensing", opts.sensing, "TX sensing model: faded | mean");
  cmd->add_option("--outage", opts.outage, "Primary outage reading: printed | corrected | physical");
}

void report(const saplab::cli::Files& files) {
  for (const auto& f : files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace saplab::cli;

  CLI::App app{"Sensing-based spectrum sharing: analysis, optimization and simulation"};
  app.set_version_flag("--version", std::string("sap_lab ") + kVersion);
  app.require_subcommand(1);

  CommandOptions opts;
  std::string figure;

  auto* analyze = app.add_subcommand("analyze", "Access probability curves");
  auto* optimize = app.add_subcommand("optimize", "Joint theta/beta search for maximum ASE");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure's data");
  for (auto* cmd : {analyze, optimize, simulate, reproduce}) add_common(cmd, opts);
  reproduce->add_option("figure", figure, "fig5 | fig6 | fig7 | fig8 | fig9 | fig10")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  return run_guarded(
      [&] {
        if (*analyze) report(cmd_analyze(opts));
        if (*optimize) report(cmd_optimize(opts));
        if (*simulate) report(cmd_simulate(opts));
        if (*reproduce) report(cmd_reproduce(figure, opts));
      },
      std::cerr);
}

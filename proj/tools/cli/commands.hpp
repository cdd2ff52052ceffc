#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace saplab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitInfeasible = 3,
  kExitNonConvergence = 4,
};

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;  // overrides the config out_dir
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::string> variant;  // printed | linear | both
  std::optional<std::string> sensing;  // faded | mean
  std::optional<std::string> outage;   // printed | corrected | physical
};

/// Config file (or defaults) with the command-line overrides applied.
ExperimentConfig effective_config(const CommandOptions& opts);

using Files = std::vector<std::filesystem::path>;

/// Access-probability curves over the theta x I grid.
Files cmd_analyze(const CommandOptions& opts);
/// Optimum (JSON + CSV) and the searched ASE surface.
Files cmd_optimize(const CommandOptions& opts);
/// Monte Carlo estimates in long format.
Files cmd_simulate(const CommandOptions& opts);
/// Built-in figure scenarios: fig5 ... fig10.
Files cmd_reproduce(const std::string& figure, const CommandOptions& opts);

const std::vector<std::string>& known_figures();

/// Runs `body`, printing any error to `err` and mapping it to an exit code.
int run_guarded(const std::function<void()>& body, std::ostream& err);

}  // namespace saplab::cli

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "switchquad/simulation.hpp"

namespace switchquad::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSchema = 2,
  kAdt = 3,
  kSimulation = 4,
};

struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::filesystem::path out = "out";
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<long long> seed;  // accepted but unused: every model is deterministic
};

/// Loads the scenario named by --config or --preset and applies --step / --horizon.
/// Throws ConfigError (or AdtViolation for generated patterns).
sim::Scenario resolve_scenario(const Options& opts);

// Each command writes its report to `out` and failures to `err` as a single line
//   error=<kind> [path=<field>] message="<text>"
// and returns the process exit code.
int cmd_run(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_adt(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_certify(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_preset(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace switchquad::cli

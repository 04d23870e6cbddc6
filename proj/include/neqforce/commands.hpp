#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neqforce/analysis.hpp"
#include "neqforce/asymptotics.hpp"
#include "neqforce/run_config.hpp"

namespace neqforce {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailure = 1,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
};

/// Curve as CSV: one comment line with units and sign convention, a header,
/// then one row per grid point.
void write_curve_csv(std::ostream& out, const Curve& curve, const AnySystem& sys);

int cmd_curve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_equilibria(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_spp(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Suite selected by the config, with temperature overrides applied.
std::vector<ValidationCase> selected_validation_cases(const ValidationOptions& opts);

/// Runs the cases on up to `threads` workers; report order follows `cases`.
std::vector<ValidationReport> run_validation(const std::vector<ValidationCase>& cases,
                                             const QuadratureSettings& settings, double threshold,
                                             int threads);

struct CommandLine {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
  std::optional<double> rel_tol;
};

/// Loads the config, applies overrides and dispatches; maps errors to exit codes.
int run_command(const CommandLine& cl, std::ostream& log);

}  // namespace neqforce

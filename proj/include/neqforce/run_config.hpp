#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "neqforce/analysis.hpp"
#include "neqforce/asymptotics.hpp"
#include "neqforce/quadrature.hpp"

namespace neqforce {

struct GridSpec {
  double d_min = 0.0;  // m
  double d_max = 0.0;  // m
  int points = 0;
  GridSpacing spacing = GridSpacing::Log;
};

struct ValidationOptions {
  double threshold = kDefaultRegimeThreshold;
  /// Replaces every case temperature; used to probe the regime gates.
  std::optional<double> temperature;
  /// Case ids or regime names to run; empty runs the whole suite.
  std::vector<std::string> cases;
};

/// Parsed run configuration. Lengths in the file are in micrometres and
/// temperatures in kelvin; everything here is SI.
struct RunConfig {
  std::optional<AnySystem> system;
  std::optional<GridSpec> grid;
  QuadratureSettings quadrature;
  std::optional<std::pair<double, double>> masses;  // kg
  ValidationOptions validation;
  std::optional<std::string> output;
  int threads = 1;

  /// Explicit grid or the default one for the system.
  std::vector<double> d_grid() const;
  const AnySystem& require_system() const;
};

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& file);

}  // namespace neqforce

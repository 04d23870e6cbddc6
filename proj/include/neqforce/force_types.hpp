#pragma once

#include <optional>
#include <string>
#include <vector>

namespace neqforce {

/// One force contribution in newtons, with its quadrature status.
struct ForceTerm {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

enum class SignConvention { AttractionPositive };

/// Plate-sourced force split into far-field and near-field parts.
struct PlateSourceParts {
  double propagating = 0.0;
  double evanescent = 0.0;
};

/// Decomposition F = F_eq(T_env) + [F_other(T_other) - F_other(T_env)]
///                 + [F_self(T_self) - F_self(T_env)], positive = attraction.
struct ForceBreakdown {
  static constexpr SignConvention convention = SignConvention::AttractionPositive;

  double equilibrium = 0.0;
  double interaction_from_other = 0.0;
  double self_emission = 0.0;
  double total = 0.0;
  std::optional<PlateSourceParts> plate_source;
  bool converged = true;
  std::vector<std::string> warnings;
};

}  // namespace neqforce

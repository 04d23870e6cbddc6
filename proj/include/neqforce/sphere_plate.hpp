#pragma once

#include <string>
#include <vector>

#include "neqforce/force_types.hpp"
#include "neqforce/materials_response.hpp"
#include "neqforce/quadrature.hpp"

namespace neqforce {

struct SpherePlateSystem {
  SphereSpec sphere;
  PlateSpec plate;
  double separation = 0.0;  // sphere center to plate surface, m
  double T_env = 0.0;       // K

  /// Throws ConfigError unless d > R and all temperatures are >= 0.
  void validate() const;
  std::vector<std::string> warnings() const;
  SpherePlateSystem at_separation(double d) const;
};

struct PlateSourceForce {
  ForceTerm propagating;  // independent of d
  ForceTerm evanescent;
};

/// Force on the sphere from radiation emitted by the plate at temperature T.
PlateSourceForce plate_source_force(const SpherePlateSystem& sys, double temperature,
                                    const QuadratureSettings& settings);

/// Force on the sphere from its own radiation at temperature T reflected by
/// the plate. Oscillates in d on the scale pi c / w_resonance.
ForceTerm sphere_self_force(const SpherePlateSystem& sys, double temperature,
                            const QuadratureSettings& settings);

/// Equilibrium Casimir-Polder force on the sphere at temperature T.
ForceTerm equilibrium_force(const SpherePlateSystem& sys, double temperature,
                            const QuadratureSettings& settings);

ForceBreakdown total_force_on_sphere(const SpherePlateSystem& sys,
                                     const QuadratureSettings& settings);

/// sum_P int_0^1 u (1 - |r^P(k_z = u w / c)|^2) du: the far-field transmission
/// weight of the plate at frequency w.
double propagating_geometric_factor(const PlateSpec& plate, double omega, double rel_tol = 1e-9);

std::vector<double> spectral_breakpoints(const SpherePlateSystem& sys);

}  // namespace neqforce

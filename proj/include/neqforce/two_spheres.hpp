#pragma once

#include <string>
#include <vector>

#include "neqforce/force_types.hpp"
#include "neqforce/materials_response.hpp"
#include "neqforce/quadrature.hpp"

namespace neqforce {

struct TwoSphereSystem {
  SphereSpec sphere1;
  SphereSpec sphere2;
  double separation = 0.0;  // center to center, m
  double T_env = 0.0;       // K

  /// Throws ConfigError unless d > R1 + R2 and all temperatures are >= 0.
  void validate() const;
  /// Geometry warnings (one-reflection validity d / max R < 4).
  std::vector<std::string> warnings() const;
  TwoSphereSystem swapped() const;
  TwoSphereSystem at_separation(double d) const;
};

/// Force on sphere 2 from radiation emitted by sphere 1 at temperature T.
ForceTerm interaction_force_F12(const TwoSphereSystem& sys, double temperature,
                                const QuadratureSettings& settings);

/// Force on sphere 2 from its own radiation (at temperature T) scattered once
/// by sphere 1. Oscillates in d on the scale pi c / w_resonance.
ForceTerm self_force_F22(const TwoSphereSystem& sys, double temperature,
                         const QuadratureSettings& settings);

/// Equilibrium Casimir-Polder force between the two dipoles at temperature T
/// (Matsubara sum; imaginary-frequency integral at T = 0). Electric-electric
/// and magnetic-magnetic couplings only.
ForceTerm equilibrium_force(const TwoSphereSystem& sys, double temperature,
                            const QuadratureSettings& settings);

ForceBreakdown total_force_on_sphere2(const TwoSphereSystem& sys, const QuadratureSettings& settings);
ForceBreakdown total_force_on_sphere1(const TwoSphereSystem& sys, const QuadratureSettings& settings);

struct PairBreakdown {
  ForceBreakdown on_sphere1;
  ForceBreakdown on_sphere2;
};

/// Both breakdowns, sharing the equilibrium evaluation.
PairBreakdown total_forces(const TwoSphereSystem& sys, const QuadratureSettings& settings);

/// Signed components along the unit vector from sphere 1 to sphere 2.
struct AxialForces {
  double on_sphere1 = 0.0;
  double on_sphere2 = 0.0;
};

/// Attraction pulls sphere 1 towards +z and sphere 2 towards -z.
AxialForces to_axial(double attraction_on_sphere1, double attraction_on_sphere2);

/// Frequencies where either sphere's response is sharply structured.
std::vector<double> spectral_breakpoints(const TwoSphereSystem& sys);

}  // namespace neqforce

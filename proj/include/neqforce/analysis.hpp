#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "neqforce/asymptotics.hpp"
#include "neqforce/force_types.hpp"
#include "neqforce/quadrature.hpp"

namespace neqforce {

struct CurveSample {
  double d = 0.0;
  /// Force on sphere 1; empty for the sphere-plate geometry.
  std::optional<ForceBreakdown> breakdown1;
  /// Force on sphere 2, or on the sphere facing the plate.
  ForceBreakdown breakdown2;
  /// Set when the point failed with a numerical error.
  std::string error;

  bool ok() const { return error.empty(); }
};

using Curve = std::vector<CurveSample>;

enum class GridSpacing { Linear, Log };

std::vector<double> make_grid(double d_min, double d_max, int points, GridSpacing spacing);

/// Log grid from 4 max(R) to 20 lambda_T of the lowest nonzero temperature,
/// 200 points.
std::vector<double> default_grid(const AnySystem& sys);

/// Breakdown(s) at one separation.
CurveSample evaluate_point(const AnySystem& sys, double d, const QuadratureSettings& settings);

/// One sample per grid point, evaluated on up to `threads` workers. Numerical
/// errors are recorded per sample.
Curve force_curve(const AnySystem& sys, const std::vector<double>& grid,
                  const QuadratureSettings& settings, int threads = 1);

enum class Stability { Stable, Unstable };

std::string_view stability_name(Stability s);

struct EquilibriumPoint {
  double d_star = 0.0;
  Stability stability = Stability::Unstable;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

using ScalarFn = std::function<double(double)>;

/// Sign changes of f sampled on d, refined by bisection on `refine` (or by
/// linear interpolation when empty) to relative d tolerance `rel_tol`.
/// Stable when f goes from negative to positive with increasing d.
std::vector<EquilibriumPoint> find_sign_changes(const std::vector<double>& d,
                                                const std::vector<double>& f,
                                                const ScalarFn& refine, double rel_tol = 1e-4);

/// Equilibria of the total force on sphere 2 (or the sphere facing the plate).
std::vector<EquilibriumPoint> find_equilibria(const Curve& curve, const AnySystem& sys,
                                              const QuadratureSettings& settings,
                                              double rel_tol = 1e-4);

struct SppPoint {
  double d_star = 0.0;
  Stability stability = Stability::Unstable;
  double mass_ratio = 1.0;  // m2 / m1
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Solid spheres of equal density: masses proportional to R^3.
std::pair<double, double> default_masses(const TwoSphereSystem& sys);

/// Separations where both spheres have the same axial acceleration, with
/// a1 = +F1 / m1 and a2 = -F2 / m2 along the axis from sphere 1 to sphere 2.
/// Stable when d(a2 - a1)/dd < 0. Points where both accelerations vanish are
/// not reported.
std::vector<SppPoint> find_spp(const Curve& curve, const TwoSphereSystem& sys,
                               const QuadratureSettings& settings,
                               std::optional<std::pair<double, double>> masses = {},
                               double rel_tol = 1e-4);

struct WavelengthEstimate {
  double wavelength = 0.0;  // m
  double stddev = 0.0;      // m
  std::size_t zeros = 0;
};

/// Twice the mean spacing of consecutive zeros of f sampled on d (linear
/// interpolation inside each bracket). Throws TooFewCrossings below four zeros.
WavelengthEstimate oscillation_wavelength(const std::vector<double>& d,
                                          const std::vector<double>& f);

/// Same, on the self-emission term of sphere 2 along a curve.
WavelengthEstimate oscillation_wavelength(const Curve& curve);

}  // namespace neqforce

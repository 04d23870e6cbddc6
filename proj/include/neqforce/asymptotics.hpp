#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "neqforce/materials_response.hpp"
#include "neqforce/quadrature.hpp"
#include "neqforce/sphere_plate.hpp"
#include "neqforce/two_spheres.hpp"

namespace neqforce {

enum class Regime {
  TwoSphereLowT,             // interaction force, lambda_T >> lambda_0, R
  TwoSphereSelfLargeD,       // self force, d >> lambda_T >> lambda_0, R
  TwoSphereSelfHighLambdaT,  // self force, lambda_T >> d, lambda_0, R
  TwoSphereEqShort,          // equilibrium, lambda_T >> d >> lambda_0
  TwoSphereEqLong,           // equilibrium, d >> lambda_T
  PlatePropLowT,             // plate far-field source, lambda_T >> lambda_0, R
  PlateEvanLargeD,           // plate near-field source, d >> lambda_T >> lambda_0, R
  PlateEvanHighLambdaT,      // plate near-field source, lambda_T >> d, lambda_0, R
  PlateSelfHighLambdaT,      // sphere self force near a plate, lambda_T >> d, lambda_0, R
  PlateEqShort,              // equilibrium, lambda_T >> d >> R, needs Phi(eps0)
  PlateEqLong,               // equilibrium, d >> lambda_T, R
};

inline constexpr std::array<Regime, 11> kAllRegimes = {
    Regime::TwoSphereLowT,        Regime::TwoSphereSelfLargeD,  Regime::TwoSphereSelfHighLambdaT,
    Regime::TwoSphereEqShort,     Regime::TwoSphereEqLong,      Regime::PlatePropLowT,
    Regime::PlateEvanLargeD,      Regime::PlateEvanHighLambdaT, Regime::PlateSelfHighLambdaT,
    Regime::PlateEqShort,         Regime::PlateEqLong};

std::string_view regime_name(Regime r);
Regime regime_from_name(std::string_view name);
bool is_two_sphere_regime(Regime r);

/// Length scales that enter the validity predicates.
struct RegimeScales {
  double lambda0 = 0.0;  // longest resonance wavelength of the bodies, m
  double radius = 0.0;   // largest sphere radius, m
};

struct TwoSphereStatics {
  StaticExpansion sphere1;
  StaticExpansion sphere2;
  RegimeScales scales;
};

struct SpherePlateStatics {
  StaticExpansion sphere;
  MaterialStatics plate;
  /// Far-field transmission weight of the plate in the static limit.
  double propagating_factor = 0.0;
  std::optional<double> phi;
  RegimeScales scales;
};

using RegimeInputs = std::variant<TwoSphereStatics, SpherePlateStatics>;

TwoSphereStatics regime_inputs(const TwoSphereSystem& sys);
SpherePlateStatics regime_inputs(const SpherePlateSystem& sys, std::optional<double> phi = {});

/// Closed-form force in newtons (attraction positive). Throws MissingParameter
/// for PlateEqShort without phi and ConfigError when the inputs do not match
/// the regime's geometry.
double evaluate(Regime regime, const RegimeInputs& inputs, double d, double temperature);

struct ValidityCheck {
  bool satisfied = true;
  std::vector<std::string> violations;
};

inline constexpr double kDefaultRegimeThreshold = 30.0;

/// Every scale-separation ratio of the regime must reach `threshold`.
ValidityCheck regime_validity(Regime regime, const RegimeScales& scales, double d,
                              double temperature, double threshold = kDefaultRegimeThreshold);

using AnySystem = std::variant<TwoSphereSystem, SpherePlateSystem>;

struct ValidationCase {
  std::string id;
  Regime regime;
  AnySystem system;
  double temperature = 0.0;  // temperature of the term being compared, K
  double tolerance = 0.05;   // on rel_dev
};

enum class ValidationStatus { Pass, Fail, Skipped };

struct ValidationReport {
  std::string id;
  Regime regime;
  double numeric = 0.0;
  double closed_form = 0.0;
  double rel_dev = 0.0;
  double tolerance = 0.0;
  ValidationStatus status = ValidationStatus::Skipped;
  std::vector<std::string> warnings;
};

/// Numeric force of the regime's term against its closed form. For
/// PlateEqShort the compared quantity is the local log-log slope of the
/// equilibrium force (closed form -5), and rel_dev = |slope + 5| / 5.
/// Cases whose validity predicate fails are skipped with warnings.
ValidationReport validate_against_numeric(const ValidationCase& vc,
                                          const QuadratureSettings& settings,
                                          double threshold = kDefaultRegimeThreshold);

/// Single broad Lorentz line in the UV used by the oracle suite.
DielectricModel validation_material();

/// The oracle suite run by `neqforce validate` and the acceptance tests.
std::vector<ValidationCase> default_validation_suite();

/// d ln|f| / d ln d by a central difference with relative step `rel_step`.
double loglog_slope(const std::function<double(double)>& f, double d, double rel_step = 0.02);

std::string_view status_name(ValidationStatus s);

}  // namespace neqforce

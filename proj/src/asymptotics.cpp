#include "neqforce/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

namespace {

using C = PhysicalConstants;

constexpr double kHbarC = C::hbar * C::c;

struct RegimeInfo {
  Regime regime;
  std::string_view name;
  bool two_spheres;
};

constexpr std::array<RegimeInfo, 11> kInfo = {{
    {Regime::TwoSphereLowT, "TwoSphereLowT", true},
    {Regime::TwoSphereSelfLargeD, "TwoSphereSelfLargeD", true},
    {Regime::TwoSphereSelfHighLambdaT, "TwoSphereSelfHighLambdaT", true},
    {Regime::TwoSphereEqShort, "TwoSphereEqShort", true},
    {Regime::TwoSphereEqLong, "TwoSphereEqLong", true},
    {Regime::PlatePropLowT, "PlatePropLowT", false},
    {Regime::PlateEvanLargeD, "PlateEvanLargeD", false},
    {Regime::PlateEvanHighLambdaT, "PlateEvanHighLambdaT", false},
    {Regime::PlateSelfHighLambdaT, "PlateSelfHighLambdaT", false},
    {Regime::PlateEqShort, "PlateEqShort", false},
    {Regime::PlateEqLong, "PlateEqLong", false},
}};

const RegimeInfo& info(Regime r) {
  for (const auto& i : kInfo)
    if (i.regime == r) return i;
  throw Error("unknown regime");
}

double static_probe_for_fresnel(const DielectricModel& model) {
  if (const auto* t = std::get_if<Tabulated>(&model.form)) return t->samples.front().omega;
  const double w0 = lowest_resonance(model);
  return w0 > 0.0 ? 1e-4 * w0 : 1.0;
}

double two_sphere_formula(Regime r, const TwoSphereStatics& s, double d, double lt) {
  const auto& b1 = s.sphere1;
  const auto& b2 = s.sphere2;
  const double a1 = b1.lambda_in * b1.alpha_i0;
  const double a2 = b2.lambda_in * b2.alpha_i0;
  const double pi = kPi;
  switch (r) {
    case Regime::TwoSphereLowT: {
      const double bracket =
          -32.0 * std::pow(pi, 7) * a2 / (5.0 * lt) +
          b2.alpha0 * (32.0 * std::pow(pi, 5) * lt / (21.0 * d) +
                       8.0 * std::pow(pi, 3) * std::pow(lt, 3) / (5.0 * std::pow(d, 3)) +
                       18.0 * pi * std::pow(lt, 5) / std::pow(d, 5));
      return kHbarC / (3.0 * d * d) * a1 / std::pow(lt, 7) * bracket;
    }
    case Regime::TwoSphereSelfLargeD:
      return 60.0 * kHbarC * a2 * b1.alpha0 / (pi * std::pow(d, 9));
    case Regime::TwoSphereSelfHighLambdaT:
      return 6.0 * pi * kHbarC * a2 * b1.alpha0 / (std::pow(d, 7) * lt * lt);
    case Regime::TwoSphereEqShort:
      return 161.0 * kHbarC * b1.alpha0 * b2.alpha0 / (4.0 * pi * std::pow(d, 8));
    case Regime::TwoSphereEqLong:
      return 18.0 * kHbarC * b1.alpha0 * b2.alpha0 / (std::pow(d, 7) * lt);
    default:
      break;
  }
  throw ConfigError("regime", std::string(regime_name(r)) + " needs sphere-plate inputs");
}

double plate_formula(Regime r, const SpherePlateStatics& s, double d, double lt) {
  const double pi = kPi;
  const double e = s.plate.eps0;
  const double a_s = s.sphere.lambda_in * s.sphere.alpha_i0;
  const double a0 = s.sphere.alpha0;
  const double delta = (e - 1.0) / (e + 1.0);
  switch (r) {
    case Regime::PlatePropLowT:
      return -8.0 * std::pow(pi, 5) / 63.0 * kHbarC / std::pow(lt, 6) * s.propagating_factor * a_s;
    case Regime::PlateEvanLargeD: {
      const Complex ratio = (1.0 + e) / std::sqrt(Complex(e - 1.0, 0.0));
      return pi / 6.0 * kHbarC / (lt * lt * d * d * d) * ratio.real() * a0;
    }
    case Regime::PlateEvanHighLambdaT:
      return pi / 2.0 * kHbarC * s.plate.lambda_in / (lt * lt * std::pow(d, 4)) /
             ((1.0 + e) * (1.0 + e)) * a0;
    case Regime::PlateSelfHighLambdaT:
      return pi / 4.0 * kHbarC / (lt * lt * std::pow(d, 4)) * delta * a_s;
    case Regime::PlateEqShort:
      if (!s.phi) throw MissingParameter("PlateEqShort needs phi(eps0) of the plate");
      return 3.0 / (2.0 * pi) * kHbarC / std::pow(d, 5) * delta * a0 * *s.phi;
    case Regime::PlateEqLong:
      return 3.0 * kHbarC / (4.0 * std::pow(d, 4) * lt) * delta * a0;
    default:
      break;
  }
  throw ConfigError("regime", std::string(regime_name(r)) + " needs two-sphere inputs");
}

void require(ValidityCheck& c, const char* what, double ratio, double threshold) {
  if (!(ratio >= threshold)) {
    c.satisfied = false;
    std::ostringstream os;
    os << what << " = " << ratio << " < " << threshold;
    c.violations.push_back(os.str());
  }
}

}  // namespace

std::string_view regime_name(Regime r) { return info(r).name; }

Regime regime_from_name(std::string_view name) {
  for (const auto& i : kInfo)
    if (i.name == name) return i.regime;
  throw ConfigError("regime", "unknown regime '" + std::string(name) + "'");
}

bool is_two_sphere_regime(Regime r) { return info(r).two_spheres; }

std::string_view status_name(ValidationStatus s) {
  switch (s) {
    case ValidationStatus::Pass: return "pass";
    case ValidationStatus::Fail: return "fail";
    case ValidationStatus::Skipped: return "skipped";
  }
  return "unknown";
}

TwoSphereStatics regime_inputs(const TwoSphereSystem& sys) {
  TwoSphereStatics s;
  s.sphere1 = static_expansion(sys.sphere1);
  s.sphere2 = static_expansion(sys.sphere2);
  s.scales.lambda0 = std::max(lowest_resonance_wavelength(sys.sphere1.dielectric),
                              lowest_resonance_wavelength(sys.sphere2.dielectric));
  s.scales.radius = std::max(sys.sphere1.radius, sys.sphere2.radius);
  return s;
}

SpherePlateStatics regime_inputs(const SpherePlateSystem& sys, std::optional<double> phi) {
  SpherePlateStatics s;
  s.sphere = static_expansion(sys.sphere);
  s.plate = material_statics(sys.plate.dielectric);
  s.propagating_factor =
      propagating_geometric_factor(sys.plate, static_probe_for_fresnel(sys.plate.dielectric));
  s.phi = phi;
  s.scales.lambda0 = std::max(lowest_resonance_wavelength(sys.sphere.dielectric),
                              lowest_resonance_wavelength(sys.plate.dielectric));
  s.scales.radius = sys.sphere.radius;
  return s;
}

double evaluate(Regime regime, const RegimeInputs& inputs, double d, double temperature) {
  if (!(d > 0.0)) throw ConfigError("d", "must be > 0");
  if (!(temperature > 0.0) && regime != Regime::PlateEqShort && regime != Regime::TwoSphereEqShort) {
    throw ConfigError("temperature", "closed forms need T > 0");
  }
  const double lt = thermal_wavelength(temperature);
  if (const auto* ts = std::get_if<TwoSphereStatics>(&inputs)) {
    return two_sphere_formula(regime, *ts, d, lt);
  }
  return plate_formula(regime, std::get<SpherePlateStatics>(inputs), d, lt);
}

ValidityCheck regime_validity(Regime regime, const RegimeScales& sc, double d, double temperature,
                              double threshold) {
  ValidityCheck c;
  const double lt = thermal_wavelength(temperature);
  const double l0 = sc.lambda0;
  const double r = sc.radius;
  switch (regime) {
    case Regime::TwoSphereLowT:
    case Regime::PlatePropLowT:
      require(c, "lambda_T / lambda_0", lt / l0, threshold);
      require(c, "lambda_T / R", lt / r, threshold);
      break;
    case Regime::TwoSphereSelfLargeD:
    case Regime::PlateEvanLargeD:
      require(c, "d / lambda_T", d / lt, threshold);
      require(c, "lambda_T / lambda_0", lt / l0, threshold);
      require(c, "lambda_T / R", lt / r, threshold);
      break;
    case Regime::TwoSphereSelfHighLambdaT:
    case Regime::PlateEvanHighLambdaT:
    case Regime::PlateSelfHighLambdaT:
      require(c, "lambda_T / d", lt / d, threshold);
      require(c, "lambda_T / lambda_0", lt / l0, threshold);
      require(c, "lambda_T / R", lt / r, threshold);
      break;
    case Regime::TwoSphereEqShort:
    case Regime::PlateEqShort:
      require(c, "lambda_T / d", lt / d, threshold);
      require(c, "d / lambda_0", d / l0, threshold);
      break;
    case Regime::TwoSphereEqLong:
    case Regime::PlateEqLong:
      require(c, "d / lambda_T", d / lt, threshold);
      require(c, "d / R", d / r, threshold);
      break;
  }
  return c;
}

double loglog_slope(const std::function<double(double)>& f, double d, double rel_step) {
  const double hi = d * (1.0 + rel_step), lo = d / (1.0 + rel_step);
  return (std::log(std::abs(f(hi))) - std::log(std::abs(f(lo)))) / (std::log(hi) - std::log(lo));
}

namespace {

double numeric_two_spheres(Regime r, const TwoSphereSystem& sys, double t,
                           const QuadratureSettings& s) {
  switch (r) {
    case Regime::TwoSphereLowT: return interaction_force_F12(sys, t, s).value;
    case Regime::TwoSphereSelfLargeD:
    case Regime::TwoSphereSelfHighLambdaT: return self_force_F22(sys, t, s).value;
    case Regime::TwoSphereEqShort:
    case Regime::TwoSphereEqLong: return equilibrium_force(sys, t, s).value;
    default: break;
  }
  throw ConfigError("regime", std::string(regime_name(r)) + " needs a sphere-plate system");
}

double numeric_plate(Regime r, const SpherePlateSystem& sys, double t,
                     const QuadratureSettings& s) {
  switch (r) {
    case Regime::PlatePropLowT: return plate_source_force(sys, t, s).propagating.value;
    case Regime::PlateEvanLargeD:
    case Regime::PlateEvanHighLambdaT: return plate_source_force(sys, t, s).evanescent.value;
    case Regime::PlateSelfHighLambdaT: return sphere_self_force(sys, t, s).value;
    case Regime::PlateEqLong: return equilibrium_force(sys, t, s).value;
    default: break;
  }
  throw ConfigError("regime", std::string(regime_name(r)) + " needs a two-sphere system");
}

}  // namespace

ValidationReport validate_against_numeric(const ValidationCase& vc,
                                          const QuadratureSettings& settings, double threshold) {
  ValidationReport rep;
  rep.id = vc.id;
  rep.regime = vc.regime;
  rep.tolerance = vc.tolerance;
  const bool two = std::holds_alternative<TwoSphereSystem>(vc.system);
  if (two != is_two_sphere_regime(vc.regime)) {
    throw ConfigError("regime", std::string(regime_name(vc.regime)) + " does not match the geometry");
  }
  const double d = two ? std::get<TwoSphereSystem>(vc.system).separation
                       : std::get<SpherePlateSystem>(vc.system).separation;
  const RegimeInputs inputs = two ? RegimeInputs(regime_inputs(std::get<TwoSphereSystem>(vc.system)))
                                  : RegimeInputs(regime_inputs(std::get<SpherePlateSystem>(vc.system)));
  const RegimeScales scales = std::visit([](const auto& s) { return s.scales; }, inputs);
  const ValidityCheck check = regime_validity(vc.regime, scales, d, vc.temperature, threshold);
  if (!check.satisfied) {
    rep.status = ValidationStatus::Skipped;
    for (const auto& v : check.violations) rep.warnings.push_back("regime predicate violated: " + v);
    return rep;
  }

  if (vc.regime == Regime::PlateEqShort) {
    const auto& sys = std::get<SpherePlateSystem>(vc.system);
    const auto f = [&](double dd) {
      return equilibrium_force(sys.at_separation(dd), vc.temperature, settings).value;
    };
    rep.numeric = loglog_slope(f, d);
    rep.closed_form = -5.0;
  } else if (two) {
    rep.numeric = numeric_two_spheres(vc.regime, std::get<TwoSphereSystem>(vc.system),
                                      vc.temperature, settings);
    rep.closed_form = evaluate(vc.regime, inputs, d, vc.temperature);
  } else {
    rep.numeric = numeric_plate(vc.regime, std::get<SpherePlateSystem>(vc.system),
                                vc.temperature, settings);
    rep.closed_form = evaluate(vc.regime, inputs, d, vc.temperature);
  }
  rep.rel_dev = std::abs(rep.numeric - rep.closed_form) / std::abs(rep.closed_form);
  rep.status = rep.rel_dev < vc.tolerance ? ValidationStatus::Pass : ValidationStatus::Fail;
  return rep;
}

DielectricModel validation_material() {
  const double w = 3e16;
  return DielectricModel::lorentz("uv_lorentz", 1.0, {{w, 3.0 * w * w, 0.5 * w}});
}

std::vector<ValidationCase> default_validation_suite() {
  const double t300 = 300.0;
  const double lt = thermal_wavelength(t300);
  SphereSpec sphere;
  sphere.radius = 1e-8;
  sphere.dielectric = validation_material();
  PlateSpec plate;
  plate.dielectric = validation_material();

  const auto pair = [&](double d, double t) {
    TwoSphereSystem s;
    s.sphere1 = sphere;
    s.sphere2 = sphere;
    s.sphere1.radius = 1.2e-8;
    s.separation = d;
    s.T_env = 0.0;
    s.sphere1.temperature = t;
    s.sphere2.temperature = t;
    return s;
  };
  const auto facing = [&](double d, double t) {
    SpherePlateSystem s;
    s.sphere = sphere;
    s.plate = plate;
    s.separation = d;
    s.sphere.temperature = t;
    s.plate.temperature = t;
    return s;
  };

  std::vector<ValidationCase> v;
  v.push_back({"interaction_low_T_d0.1", Regime::TwoSphereLowT, pair(0.1 * lt, t300), t300, 0.05});
  v.push_back({"interaction_low_T_d1", Regime::TwoSphereLowT, pair(lt, t300), t300, 0.05});
  v.push_back({"interaction_low_T_d10", Regime::TwoSphereLowT, pair(10.0 * lt, t300), t300, 0.05});
  v.push_back({"self_large_d", Regime::TwoSphereSelfLargeD, pair(30.0 * lt, t300), t300, 0.05});
  v.push_back({"self_high_lambda_T", Regime::TwoSphereSelfHighLambdaT, pair(lt / 30.0, t300),
               t300, 0.05});
  const double t4 = 4.0;
  v.push_back({"equilibrium_short", Regime::TwoSphereEqShort, pair(2.5e-6, t4), t4, 0.02});
  v.push_back({"equilibrium_long", Regime::TwoSphereEqLong, pair(105.0 * lt, t300), t300, 0.02});
  v.push_back({"plate_propagating", Regime::PlatePropLowT, facing(10e-6, t300), t300, 0.05});
  v.push_back({"plate_evanescent_large_d", Regime::PlateEvanLargeD, facing(100.0 * lt, t300),
               t300, 0.05});
  v.push_back({"plate_evanescent_high_lambda_T", Regime::PlateEvanHighLambdaT,
               facing(lt / 100.0, t300), t300, 0.05});
  v.push_back({"plate_self_high_lambda_T", Regime::PlateSelfHighLambdaT, facing(lt / 100.0, t300),
               t300, 0.05});
  v.push_back({"plate_equilibrium_long", Regime::PlateEqLong, facing(100.0 * lt, t300), t300, 0.03});
  const double t1 = 1.0;
  v.push_back({"plate_equilibrium_short_slope", Regime::PlateEqShort, facing(15e-6, t1), t1, 0.01});
  return v;
}

}  // namespace neqforce

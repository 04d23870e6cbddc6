#include "neqforce/two_spheres.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

namespace {

using C = PhysicalConstants;

AdaptiveTolerance scaled_tolerance(const QuadratureSettings& s, double prefactor) {
  return {s.rel_tol, s.abs_floor / std::abs(prefactor), 0.0, s.max_subdivisions};
}

ForceTerm to_term(const RealResult& r, double prefactor) {
  return {prefactor * r.value, std::abs(prefactor) * r.error_estimate, r.converged};
}

void append(std::vector<std::string>& out, const std::vector<std::string>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

}  // namespace

void TwoSphereSystem::validate() const {
  sphere1.validate("sphere1");
  sphere2.validate("sphere2");
  if (!(T_env >= 0.0)) throw ConfigError("T_env", "must be >= 0 K");
  if (!(separation > sphere1.radius + sphere2.radius)) {
    throw ConfigError("separation", "must exceed R1 + R2 (spheres overlap)");
  }
}

std::vector<std::string> TwoSphereSystem::warnings() const {
  std::vector<std::string> w;
  const double rmax = std::max(sphere1.radius, sphere2.radius);
  if (separation / rmax < 4.0) {
    std::ostringstream os;
    os << "d / max(R) = " << separation / rmax << " < 4: one-reflection approximation is poor";
    w.push_back(os.str());
  }
  return w;
}

TwoSphereSystem TwoSphereSystem::swapped() const {
  TwoSphereSystem s = *this;
  std::swap(s.sphere1, s.sphere2);
  return s;
}

TwoSphereSystem TwoSphereSystem::at_separation(double d) const {
  TwoSphereSystem s = *this;
  s.separation = d;
  return s;
}

std::vector<double> spectral_breakpoints(const TwoSphereSystem& sys) {
  auto bp = resonance_hints(sys.sphere1.dielectric);
  const auto more = resonance_hints(sys.sphere2.dielectric);
  bp.insert(bp.end(), more.begin(), more.end());
  std::sort(bp.begin(), bp.end());
  return bp;
}

ForceTerm interaction_force_F12(const TwoSphereSystem& sys, double temperature,
                                const QuadratureSettings& settings) {
  if (temperature <= 0.0) return {};
  const double d = sys.separation;
  const double prefactor = -C::hbar / (C::c * kPi);
  const auto integrand = [&](double w) {
    const DipoleT t1 = dipole_T(sys.sphere1, w);
    const DipoleT t2 = dipole_T(sys.sphere2, w);
    const double x = w * d / C::c;
    const double x2 = x * x, x3 = x2 * x, x5 = x3 * x2, x7 = x5 * x2;
    const Complex t1p[2] = {t1.magnetic, t1.electric};
    const Complex t2p[2] = {t2.magnetic, t2.electric};
    double sum = 0.0;
    for (int p = 0; p < 2; ++p) {
      if (t1p[p].real() == 0.0) continue;
      for (int q = 0; q < 2; ++q) {
        const double bracket = 9.0 / x2 * t2p[q].real() +
                               t2p[q].imag() * (9.0 / x3 + 18.0 / x5 + (p == q ? 81.0 / x7 : 0.0));
        sum += t1p[p].real() * bracket;
      }
    }
    return w * sum;
  };
  QuadratureSettings s = settings;
  s.abs_floor = settings.abs_floor / std::abs(prefactor);
  const auto bp = spectral_breakpoints(sys);
  return to_term(bose_weighted_integral(integrand, temperature, s, bp), prefactor);
}

ForceTerm self_force_F22(const TwoSphereSystem& sys, double temperature,
                         const QuadratureSettings& settings) {
  if (temperature <= 0.0) return {};
  const double d = sys.separation;
  const double prefactor = C::hbar / (C::c * kPi);
  const auto integrand = [&](double w) {
    const double n = bose_occupation(w, temperature);
    if (n == 0.0) return 0.0;
    const DipoleT t1 = dipole_T(sys.sphere1, w);
    const DipoleT t2 = dipole_T(sys.sphere2, w);
    const double x = w * d / C::c;
    const Complex i(0.0, 1.0);
    const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x3 * x3, x7 = x6 * x;
    const Complex phase(std::cos(2.0 * x), std::sin(2.0 * x));
    const Complex t1p[2] = {t1.magnetic, t1.electric};
    const double t2re[2] = {t2.magnetic.real(), t2.electric.real()};
    double sum = 0.0;
    for (int p = 0; p < 2; ++p) {
      if (t2re[p] == 0.0) continue;
      const Complex a = t1p[p];
      const Complex b = t1p[1 - p];
      const Complex bracket = (a - b) * (9.0 / x2 + 27.0 * i / x3) - (a - b / 2.0) * (72.0 / x4) -
                              (a - b / 8.0) * (144.0 * i / x5) +
                              a * (162.0 / x6 + 81.0 * i / x7);
      sum += t2re[p] * (bracket * phase).real();
    }
    return w * n * sum;
  };
  const double omega_max = settings.bose_cutoff_x * thermal_frequency(temperature);
  const double half_period = kPi * C::c / (2.0 * d);
  auto extra = spectral_breakpoints(sys);
  const double omega_t = thermal_frequency(temperature);
  for (double w = omega_t / 8.0; w < omega_max; w *= 2.0) extra.push_back(w);
  extra.erase(std::remove_if(extra.begin(), extra.end(),
                             [&](double w) { return !(w > 0.0 && w < omega_max); }),
              extra.end());
  const auto r = integrate_segmented(RealFn(integrand), 0.0, omega_max, half_period, extra,
                                     scaled_tolerance(settings, prefactor));
  return to_term(r, prefactor);
}

ForceTerm equilibrium_force(const TwoSphereSystem& sys, double temperature,
                            const QuadratureSettings& settings) {
  const double d = sys.separation;
  const double r1 = std::pow(sys.sphere1.radius, 3), r2 = std::pow(sys.sphere2.radius, 3);
  const double m1 = ((sys.sphere1.mu - 1.0) / (sys.sphere1.mu + 2.0)).real() * r1;
  const double m2 = ((sys.sphere2.mu - 1.0) / (sys.sphere2.mu + 2.0)).real() * r2;
  const auto g = [&](double xi) {
    const double e1 = epsilon_imag_axis(sys.sphere1.dielectric, xi);
    const double e2 = epsilon_imag_axis(sys.sphere2.dielectric, xi);
    const double a1 = (e1 - 1.0) / (e1 + 2.0) * r1;
    const double a2 = (e2 - 1.0) / (e2 + 2.0) * r2;
    const double x = xi * d / C::c;
    const double poly = 18.0 + x * (36.0 + x * (32.0 + x * (16.0 + x * (6.0 + 2.0 * x))));
    return (a1 * a2 + m1 * m2) * std::exp(-2.0 * x) * poly;
  };
  const double d7 = std::pow(d, 7);
  if (temperature > 0.0) {
    QuadratureSettings s = settings;
    const double prefactor = 2.0 / d7;
    const auto r = matsubara_sum(g, temperature, s);
    return to_term(r, prefactor);
  }
  const double prefactor = C::hbar / (kPi * d7);
  QuadratureSettings s = settings;
  s.abs_floor = settings.abs_floor / prefactor;
  auto bp = spectral_breakpoints(sys);
  return to_term(evanescent_integral(g, 2.0 * d / C::c, s, bp), prefactor);
}

namespace {

ForceBreakdown assemble(const TwoSphereSystem& sys, const ForceTerm& eq,
                        const QuadratureSettings& settings) {
  ForceBreakdown out;
  out.equilibrium = eq.value;
  bool converged = eq.converged;
  const double t_other = sys.sphere1.temperature;
  const double t_self = sys.sphere2.temperature;
  if (t_other != sys.T_env) {
    const ForceTerm a = interaction_force_F12(sys, t_other, settings);
    const ForceTerm b = interaction_force_F12(sys, sys.T_env, settings);
    out.interaction_from_other = a.value - b.value;
    converged = converged && a.converged && b.converged;
  }
  if (t_self != sys.T_env) {
    const ForceTerm a = self_force_F22(sys, t_self, settings);
    const ForceTerm b = self_force_F22(sys, sys.T_env, settings);
    out.self_emission = a.value - b.value;
    converged = converged && a.converged && b.converged;
  }
  out.total = out.equilibrium + out.interaction_from_other + out.self_emission;
  out.converged = converged;
  out.warnings = sys.warnings();
  for (double t : {sys.sphere1.temperature, sys.sphere2.temperature, sys.T_env}) {
    append(out.warnings, dipole_validity_warnings(sys.sphere1, t));
    append(out.warnings, dipole_validity_warnings(sys.sphere2, t));
  }
  std::sort(out.warnings.begin(), out.warnings.end());
  out.warnings.erase(std::unique(out.warnings.begin(), out.warnings.end()), out.warnings.end());
  if (!converged) out.warnings.push_back("quadrature did not converge to the requested tolerance");
  return out;
}

}  // namespace

ForceBreakdown total_force_on_sphere2(const TwoSphereSystem& sys,
                                      const QuadratureSettings& settings) {
  sys.validate();
  return assemble(sys, equilibrium_force(sys, sys.T_env, settings), settings);
}

ForceBreakdown total_force_on_sphere1(const TwoSphereSystem& sys,
                                      const QuadratureSettings& settings) {
  return total_force_on_sphere2(sys.swapped(), settings);
}

PairBreakdown total_forces(const TwoSphereSystem& sys, const QuadratureSettings& settings) {
  sys.validate();
  const ForceTerm eq = equilibrium_force(sys, sys.T_env, settings);
  return {assemble(sys.swapped(), eq, settings), assemble(sys, eq, settings)};
}

AxialForces to_axial(double attraction_on_sphere1, double attraction_on_sphere2) {
  return {attraction_on_sphere1, -attraction_on_sphere2};
}

}  // namespace neqforce

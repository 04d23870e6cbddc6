#include "neqforce/sphere_plate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

namespace {

using C = PhysicalConstants;

ForceTerm to_term(const RealResult& r, double prefactor) {
  return {prefactor * r.value, std::abs(prefactor) * r.error_estimate, r.converged};
}

// Total internal reflection edge k sqrt(Re(eps mu) - 1), where the evanescent
// integrands have a kink; zero when there is none.
double tir_edge(Complex eps, Complex mu, double k) {
  const double e = (eps * mu).real() - 1.0;
  return e > 0.0 ? k * std::sqrt(e) : 0.0;
}

// Counts inner integrals that stopped short of their tolerance.
struct InnerStatus {
  std::size_t failures = 0;
};

AdaptiveTolerance inner_tolerance(const QuadratureSettings& s) {
  return {0.1 * s.rel_tol, 0.0, 0.01 * s.rel_tol, 2000};
}

}  // namespace

void SpherePlateSystem::validate() const {
  sphere.validate("sphere");
  plate.validate("plate");
  if (!(T_env >= 0.0)) throw ConfigError("T_env", "must be >= 0 K");
  if (!(separation > sphere.radius)) {
    throw ConfigError("separation", "must exceed the sphere radius (sphere touches the plate)");
  }
}

std::vector<std::string> SpherePlateSystem::warnings() const {
  std::vector<std::string> w;
  if (separation / sphere.radius < 4.0) {
    std::ostringstream os;
    os << "d / R = " << separation / sphere.radius
       << " < 4: one-reflection approximation is poor";
    w.push_back(os.str());
  }
  return w;
}

SpherePlateSystem SpherePlateSystem::at_separation(double d) const {
  SpherePlateSystem s = *this;
  s.separation = d;
  return s;
}

std::vector<double> spectral_breakpoints(const SpherePlateSystem& sys) {
  auto bp = resonance_hints(sys.sphere.dielectric);
  const auto more = resonance_hints(sys.plate.dielectric);
  bp.insert(bp.end(), more.begin(), more.end());
  std::sort(bp.begin(), bp.end());
  return bp;
}

double propagating_geometric_factor(const PlateSpec& plate, double omega, double rel_tol) {
  const Complex eps = epsilon(plate.dielectric, omega);
  const auto f = [&](double u) {
    // k = 1: the reflection coefficients depend on k_z / k only.
    const FresnelPair r = fresnel_from_kz(eps, plate.mu, 1.0, Complex(u, 0.0));
    return u * ((1.0 - std::norm(r.m)) + (1.0 - std::norm(r.n)));
  };
  const auto res = integrate_adaptive(RealFn(f), {0.0, 0.25, 0.5, 0.75, 1.0},
                                      AdaptiveTolerance{rel_tol, 0.0, rel_tol, 2000});
  return res.value;
}

PlateSourceForce plate_source_force(const SpherePlateSystem& sys, double temperature,
                                    const QuadratureSettings& settings) {
  if (temperature <= 0.0) return {};
  const double d = sys.separation;
  const double prefactor = 3.0 * C::hbar / (2.0 * C::c * kPi);
  const auto bp = spectral_breakpoints(sys);
  QuadratureSettings s = settings;
  s.abs_floor = settings.abs_floor / prefactor;

  const auto prop = [&](double w) {
    const DipoleT t = dipole_T(sys.sphere, w);
    const double re_t = t.electric.real() + t.magnetic.real();
    if (re_t == 0.0) return 0.0;
    return w * propagating_geometric_factor(sys.plate, w, 0.1 * settings.rel_tol) * re_t;
  };

  InnerStatus status;
  const auto ev = [&](double w) {
    const DipoleT t = dipole_T(sys.sphere, w);
    const double im_n = t.electric.imag(), im_m = t.magnetic.imag();
    const double k = w / C::c, k2 = k * k;
    const Complex eps = epsilon(sys.plate.dielectric, w);
    const Complex mu = sys.plate.mu;
    const auto h = [&](double q) {
      const FresnelPair r = fresnel_from_kz(eps, mu, k2, Complex(0.0, q));
      const double g = 2.0 * (k2 + q * q) / k2 - 1.0;
      const double val = im_n * (r.n * g + r.m).imag() + im_m * (r.m * g + r.n).imag();
      return q * std::exp(-2.0 * d * q) * val;
    };
    const double q_max = settings.bose_cutoff_x / (2.0 * d);
    std::vector<double> qbp{0.0, q_max};
    for (double q = 1.0 / (16.0 * d); q < q_max; q *= 2.0) qbp.push_back(q);
    const double edge = tir_edge(eps, mu, k);
    if (edge > 0.0 && edge < q_max) qbp.push_back(edge);
    const auto r = integrate_adaptive(RealFn(h), std::move(qbp), inner_tolerance(settings));
    if (!r.converged) ++status.failures;
    return w * 2.0 / k2 * r.value;
  };

  // With plate loss that stays finite as w -> 0 the integrand goes like 1/w and
  // the near-field energy diverges logarithmically; adaptive rules miss this.
  const double w_hi = 1e-6 * thermal_frequency(temperature), w_lo = 1e-2 * w_hi;
  const double g_hi = w_hi * bose_occupation(w_hi, temperature) * ev(w_hi);
  const double g_lo = w_lo * bose_occupation(w_lo, temperature) * ev(w_lo);
  if (g_lo != 0.0 && std::abs(g_lo) > 0.5 * std::abs(g_hi)) {
    throw DivergenceError(
        "plate_source_force: evanescent integrand ~ 1/omega at low frequency; the plate "
        "loss Im eps must vanish as omega -> 0");
  }

  PlateSourceForce out;
  out.propagating = to_term(bose_weighted_integral(prop, temperature, s, bp), prefactor);
  out.evanescent = to_term(bose_weighted_integral(ev, temperature, s, bp), prefactor);
  if (status.failures > 0) out.evanescent.converged = false;
  return out;
}

ForceTerm sphere_self_force(const SpherePlateSystem& sys, double temperature,
                            const QuadratureSettings& settings) {
  if (temperature <= 0.0) return {};
  const double d = sys.separation;
  const double prefactor = -3.0 * C::hbar * C::c / kPi;
  const Complex mu = sys.plate.mu;
  InnerStatus status;
  const AdaptiveTolerance itol = inner_tolerance(settings);

  const auto integrand = [&](double w) {
    const double n = bose_occupation(w, temperature);
    if (n == 0.0) return 0.0;
    const DipoleT t = dipole_T(sys.sphere, w);
    const double wn = t.electric.real(), wm = t.magnetic.real();
    if (wn == 0.0 && wm == 0.0) return 0.0;
    const double k = w / C::c, k2 = k * k;
    const Complex eps = epsilon(sys.plate.dielectric, w);

    const auto prop = [&](double kz) {
      const FresnelPair r = fresnel_from_kz(eps, mu, k2, Complex(kz, 0.0));
      const double g = 1.0 - 2.0 * kz * kz / k2;
      const Complex phase(std::cos(2.0 * d * kz), std::sin(2.0 * d * kz));
      return kz * (wn * (phase * (r.n * g + r.m)).real() + wm * (phase * (r.m * g + r.n)).real());
    };
    const auto ev = [&](double q) {
      const FresnelPair r = fresnel_from_kz(eps, mu, k2, Complex(0.0, q));
      const double g = 2.0 * (k2 + q * q) / k2 - 1.0;
      return q * std::exp(-2.0 * d * q) * (wn * (r.n * g + r.m).real() + wm * (r.m * g + r.n).real());
    };
    const double no_extra[1] = {0.5 * k};
    const auto rp = integrate_segmented(RealFn(prop), 0.0, k, kPi / (2.0 * d),
                                        std::span<const double>(no_extra, 1), itol);
    const double q_max = settings.bose_cutoff_x / (2.0 * d);
    std::vector<double> qbp{0.0, q_max};
    for (double q = 1.0 / (16.0 * d); q < q_max; q *= 2.0) qbp.push_back(q);
    const double edge = tir_edge(eps, mu, k);
    if (edge > 0.0 && edge < q_max) qbp.push_back(edge);
    const auto re = integrate_adaptive(RealFn(ev), std::move(qbp), itol);
    if (!rp.converged || !re.converged) ++status.failures;
    return n / w * (rp.value + re.value);
  };

  const double omega_t = thermal_frequency(temperature);
  const double omega_max = settings.bose_cutoff_x * omega_t;
  auto extra = spectral_breakpoints(sys);
  for (double w = omega_t / 8.0; w < omega_max; w *= 2.0) extra.push_back(w);
  extra.erase(std::remove_if(extra.begin(), extra.end(),
                             [&](double w) { return !(w > 0.0 && w < omega_max); }),
              extra.end());
  const AdaptiveTolerance tol{settings.rel_tol, settings.abs_floor / std::abs(prefactor), 0.0,
                              settings.max_subdivisions};
  const auto r = integrate_segmented(RealFn(integrand), 0.0, omega_max,
                                     kPi * C::c / (2.0 * d), extra, tol);
  ForceTerm out = to_term(r, prefactor);
  if (status.failures > 0) out.converged = false;
  return out;
}

ForceTerm equilibrium_force(const SpherePlateSystem& sys, double temperature,
                            const QuadratureSettings& settings) {
  const double d = sys.separation;
  const double r3 = std::pow(sys.sphere.radius, 3);
  const double beta = ((sys.sphere.mu - 1.0) / (sys.sphere.mu + 2.0)).real() * r3;
  const double mu_p = sys.plate.mu.real();
  const AdaptiveTolerance itol = inner_tolerance(settings);
  InnerStatus status;

  // alpha(i xi) e^{-2 xi d / c} int_0^inf ds kappa e^{-2 s d} [...] with kappa = s + xi / c.
  const auto g = [&](double xi) {
    const double es = epsilon_imag_axis(sys.sphere.dielectric, xi);
    const double alpha = (es - 1.0) / (es + 2.0) * r3;
    const double ep = epsilon_imag_axis(sys.plate.dielectric, xi);
    const double k0 = xi / C::c, k02 = k0 * k0;
    const auto h = [&](double s) {
      const double kappa = s + k0;
      const double km = std::sqrt(kappa * kappa + (ep * mu_p - 1.0) * k02);
      const double rn = (ep * kappa - km) / (ep * kappa + km);
      const double rm = (mu_p * kappa - km) / (mu_p * kappa + km);
      const double te = (2.0 * kappa * kappa - k02);
      return kappa * std::exp(-2.0 * s * d) *
             (alpha * (te * rn - k02 * rm) + beta * (te * rm - k02 * rn));
    };
    const double s_max = settings.bose_cutoff_x / (2.0 * d);
    std::vector<double> bp{0.0, s_max};
    for (double s = 1.0 / (16.0 * d); s < s_max; s *= 2.0) bp.push_back(s);
    const auto r = integrate_adaptive(RealFn(h), std::move(bp), itol);
    if (!r.converged) ++status.failures;
    return std::exp(-2.0 * k0 * d) * r.value;
  };

  ForceTerm out;
  if (temperature > 0.0) {
    out = to_term(matsubara_sum(g, temperature, settings), 2.0);
  } else {
    const double prefactor = C::hbar / kPi;
    QuadratureSettings s = settings;
    s.abs_floor = settings.abs_floor / prefactor;
    out = to_term(evanescent_integral(g, 2.0 * d / C::c, s, spectral_breakpoints(sys)),
                  prefactor);
  }
  if (status.failures > 0) out.converged = false;
  return out;
}

ForceBreakdown total_force_on_sphere(const SpherePlateSystem& sys,
                                     const QuadratureSettings& settings) {
  sys.validate();
  ForceBreakdown out;
  const ForceTerm eq = equilibrium_force(sys, sys.T_env, settings);
  out.equilibrium = eq.value;
  bool converged = eq.converged;
  PlateSourceParts parts;
  if (sys.plate.temperature != sys.T_env) {
    const PlateSourceForce a = plate_source_force(sys, sys.plate.temperature, settings);
    const PlateSourceForce b = plate_source_force(sys, sys.T_env, settings);
    parts.propagating = a.propagating.value - b.propagating.value;
    parts.evanescent = a.evanescent.value - b.evanescent.value;
    converged = converged && a.propagating.converged && a.evanescent.converged &&
                b.propagating.converged && b.evanescent.converged;
  }
  out.plate_source = parts;
  out.interaction_from_other = parts.propagating + parts.evanescent;
  if (sys.sphere.temperature != sys.T_env) {
    const ForceTerm a = sphere_self_force(sys, sys.sphere.temperature, settings);
    const ForceTerm b = sphere_self_force(sys, sys.T_env, settings);
    out.self_emission = a.value - b.value;
    converged = converged && a.converged && b.converged;
  }
  out.total = out.equilibrium + out.interaction_from_other + out.self_emission;
  out.converged = converged;
  out.warnings = sys.warnings();
  for (double t : {sys.sphere.temperature, sys.plate.temperature, sys.T_env}) {
    const auto w = dipole_validity_warnings(sys.sphere, t);
    out.warnings.insert(out.warnings.end(), w.begin(), w.end());
  }
  std::sort(out.warnings.begin(), out.warnings.end());
  out.warnings.erase(std::unique(out.warnings.begin(), out.warnings.end()), out.warnings.end());
  if (!converged) out.warnings.push_back("quadrature did not converge to the requested tolerance");
  return out;
}

}  // namespace neqforce

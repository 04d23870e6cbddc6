#include "neqforce/materials_response.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

void SphereSpec::validate(const std::string& path) const {
  if (!(radius > 0.0)) throw ConfigError(path + ".radius", "must be > 0");
  if (!(temperature >= 0.0)) throw ConfigError(path + ".temperature", "must be >= 0");
  dielectric.validate();
  check_supported(dielectric);
}

void PlateSpec::validate(const std::string& path) const {
  if (!(temperature >= 0.0)) throw ConfigError(path + ".temperature", "must be >= 0");
  dielectric.validate();
}

void check_supported(const DielectricModel& model) {
  const double peak = peak_abs_epsilon(model);
  if (!std::isfinite(peak) || peak > kConductorThreshold) {
    std::ostringstream msg;
    msg << "material '" << model.name << "' has |eps| = " << peak
        << " at resonance; conductor-like response is outside the dipole model";
    throw UnsupportedMaterial(msg.str());
  }
}

namespace {

// Probe frequency for the w -> 0 limit, and the grid spacing it may use.
double static_probe(const DielectricModel& model) {
  if (const auto* t = std::get_if<Tabulated>(&model.form)) return t->samples.front().omega;
  const double w0 = lowest_resonance(model);
  return w0 > 0.0 ? 1e-6 * w0 : 1.0;
}

double imag_slope(const DielectricModel& model, double omega) {
  if (const auto* t = std::get_if<Tabulated>(&model.form)) {
    // one-sided from the two lowest samples
    const auto& a = t->samples[0];
    const auto& b = t->samples[1];
    return (b.eps_im - a.eps_im) / (b.omega - a.omega);
  }
  double h = 0.5 * omega;
  double slope = (epsilon(model, omega + h).imag() - epsilon(model, omega - h).imag()) / (2.0 * h);
  for (int i = 0; i < 60; ++i) {
    h *= 0.5;
    const double next =
        (epsilon(model, omega + h).imag() - epsilon(model, omega - h).imag()) / (2.0 * h);
    const double change = std::abs(next - slope);
    slope = next;
    if (change <= 1e-6 * std::abs(next) || next == 0.0) break;
  }
  return slope;
}

}  // namespace

MaterialStatics material_statics(const DielectricModel& model) {
  check_supported(model);
  const double w = static_probe(model);
  const double eps0 = epsilon(model, w).real();
  if (!std::isfinite(eps0) || std::abs(eps0) > kConductorThreshold) {
    throw UnsupportedMaterial("material '" + model.name + "' has no finite static permittivity");
  }
  return {eps0, PhysicalConstants::c * imag_slope(model, w)};
}

StaticExpansion static_expansion(const SphereSpec& sphere) {
  const auto m = material_statics(sphere.dielectric);
  const double r3 = sphere.radius * sphere.radius * sphere.radius;
  StaticExpansion s;
  s.eps0 = m.eps0;
  s.lambda_in = m.lambda_in;
  s.alpha0 = (m.eps0 - 1.0) / (m.eps0 + 2.0) * r3;
  s.alpha_i0 = 3.0 * r3 / ((m.eps0 + 2.0) * (m.eps0 + 2.0));
  return s;
}

Complex polarizability(const SphereSpec& sphere, double omega) {
  const Complex eps = epsilon(sphere.dielectric, omega);
  const Complex den = eps + 2.0;
  if (den == Complex(0.0, 0.0)) {
    throw PoleError("polarizability pole: eps = -2 at omega = " + std::to_string(omega));
  }
  const double r3 = sphere.radius * sphere.radius * sphere.radius;
  return (eps - 1.0) / den * r3;
}

Complex magnetic_polarizability(const SphereSpec& sphere, double /*omega*/) {
  const Complex den = sphere.mu + 2.0;
  if (den == Complex(0.0, 0.0)) throw PoleError("magnetic polarizability pole: mu = -2");
  const double r3 = sphere.radius * sphere.radius * sphere.radius;
  return (sphere.mu - 1.0) / den * r3;
}

DipoleT dipole_T(const SphereSpec& sphere, double omega) {
  const double k = omega / PhysicalConstants::c;
  const Complex pref(0.0, 2.0 * k * k * k / 3.0);
  const Complex eps = epsilon(sphere.dielectric, omega);
  const Complex n_index = std::sqrt(eps);
  DipoleT t;
  t.electric = pref * polarizability(sphere, omega);
  t.magnetic = sphere.mu == Complex(1.0, 0.0) ? Complex(0.0, 0.0)
                                               : pref * magnetic_polarizability(sphere, omega);
  t.size_parameter = std::abs(n_index) * sphere.radius * k;
  return t;
}

std::vector<std::string> dipole_validity_warnings(const SphereSpec& sphere, double temperature) {
  std::vector<std::string> out;
  if (temperature <= 0.0) return out;
  // Wien peak of the Planck spectrum in angular frequency
  const double omega = 2.821439372 * thermal_frequency(temperature);
  const DipoleT t = dipole_T(sphere, omega);
  if (t.size_parameter > 0.3) {
    std::ostringstream msg;
    msg << "dipole approximation: |sqrt(eps)| R w/c = " << t.size_parameter
        << " > 0.3 at the thermal peak for T = " << temperature << " K";
    out.push_back(msg.str());
  }
  for (const Complex& tp : {t.electric, t.magnetic}) {
    const double lin = std::max(std::abs(tp.real()), std::abs(tp.imag()));
    if (lin > 0.0 && std::norm(tp) > 0.1 * lin) {
      std::ostringstream msg;
      msg << "terms quadratic in T are not negligible: |T|^2 = " << std::norm(tp)
          << " vs linear " << lin << " at the thermal peak";
      out.push_back(msg.str());
    }
  }
  return out;
}

Complex branch_sqrt(Complex z) {
  Complex s = std::sqrt(z);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
  return s;
}

FresnelPair fresnel_from_kz(Complex eps, Complex mu, double k2, Complex kz) {
  const Complex km = branch_sqrt((eps * mu - 1.0) * k2 + kz * kz);
  return {(mu * kz - km) / (mu * kz + km), (eps * kz - km) / (eps * kz + km)};
}

Complex fresnel(const PlateSpec& plate, double omega, double k_perp, Polarization polarization) {
  const double k = omega / PhysicalConstants::c;
  const Complex kz = branch_sqrt(Complex(k * k - k_perp * k_perp, 0.0));
  const Complex eps = epsilon(plate.dielectric, omega);
  const auto r = fresnel_from_kz(eps, plate.mu, k * k, kz);
  return polarization == Polarization::M ? r.m : r.n;
}

}  // namespace neqforce

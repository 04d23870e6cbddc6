#pragma once

#include <complex>
#include <string>
#include <vector>

#include "neqforce/dielectric.hpp"

namespace neqforce {

struct SphereSpec {
  double radius = 0.0;  // m
  DielectricModel dielectric;
  Complex mu{1.0, 0.0};
  double temperature = 0.0;  // K

  void validate(const std::string& path = "sphere") const;
};

struct PlateSpec {
  DielectricModel dielectric;
  Complex mu{1.0, 0.0};
  double temperature = 0.0;  // K

  void validate(const std::string& path = "plate") const;
};

/// Low-frequency data of an insulator: eps(w) = eps0 + i lambda_in w / c + O(w^2),
/// alpha(w) = alpha0 + i alpha_i0 lambda_in w / c + O(w^2).
struct StaticExpansion {
  double eps0 = 1.0;
  double lambda_in = 0.0;  // m
  double alpha0 = 0.0;     // m^3
  double alpha_i0 = 0.0;   // m^3
};

/// eps0 and lambda_in of a bare material (used for plates).
struct MaterialStatics {
  double eps0 = 1.0;
  double lambda_in = 0.0;  // m
};

/// Threshold on |eps| at the model's resonances above which the dipole
/// expansion is rejected as conductor-like.
inline constexpr double kConductorThreshold = 1e3;

/// Throws UnsupportedMaterial for conductor-like models.
void check_supported(const DielectricModel& model);

MaterialStatics material_statics(const DielectricModel& model);
StaticExpansion static_expansion(const SphereSpec& sphere);

/// (eps - 1) / (eps + 2) R^3. Throws PoleError at eps = -2.
Complex polarizability(const SphereSpec& sphere, double omega);
/// (mu - 1) / (mu + 2) R^3 with the sphere's (frequency independent) mu.
Complex magnetic_polarizability(const SphereSpec& sphere, double omega);

/// Dipole (l = 1) T-operator pair for both polarizations.
struct DipoleT {
  Complex electric;  // T^N
  Complex magnetic;  // T^M
  double size_parameter;  // |sqrt(eps)| R w / c
};

DipoleT dipole_T(const SphereSpec& sphere, double omega);

/// Warnings for the dipole and linear-in-T approximations, checked at the
/// Wien peak of `temperature`.
std::vector<std::string> dipole_validity_warnings(const SphereSpec& sphere, double temperature);

enum class Polarization { M, N };

inline Polarization other(Polarization p) {
  return p == Polarization::M ? Polarization::N : Polarization::M;
}

/// Square root on the branch Im >= 0 (and Re >= 0 on the real axis).
Complex branch_sqrt(Complex z);

struct FresnelPair {
  Complex m;
  Complex n;
};

/// Reflection coefficients from the vacuum normal wavenumber kz (real for
/// propagating waves, i q for evanescent ones) and k^2 = (w/c)^2.
FresnelPair fresnel_from_kz(Complex eps, Complex mu, double k2, Complex kz);

Complex fresnel(const PlateSpec& plate, double omega, double k_perp, Polarization polarization);

}  // namespace neqforce

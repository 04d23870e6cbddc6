#pragma once

#include <numbers>

namespace neqforce {

/// CODATA 2018 exact / recommended values, SI units.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double c = 299792458.0;         // m / s
  static constexpr double k_B = 1.380649e-23;      // J / K
};

inline constexpr double kPi = std::numbers::pi;

/// hbar c / (k_B T). Infinite at T = 0.
double thermal_wavelength(double temperature);

/// k_B T / hbar, the thermal angular frequency scale.
double thermal_frequency(double temperature);

/// Bose occupation 1 / (exp(hbar w / k_B T) - 1); zero for T = 0.
double bose_occupation(double omega, double temperature);

}  // namespace neqforce

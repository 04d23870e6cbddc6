#include "neqforce/constants.hpp"

#include <cmath>
#include <limits>

namespace neqforce {

double thermal_wavelength(double temperature) {
  if (temperature <= 0.0) return std::numeric_limits<double>::infinity();
  return PhysicalConstants::hbar * PhysicalConstants::c / (PhysicalConstants::k_B * temperature);
}

double thermal_frequency(double temperature) {
  return PhysicalConstants::k_B * temperature / PhysicalConstants::hbar;
}

double bose_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = omega / thermal_frequency(temperature);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

}  // namespace neqforce

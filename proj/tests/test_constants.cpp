#include <doctest.h>

#include <cmath>

#include "approx.hpp"
#include "neqforce/constants.hpp"

using namespace neqforce;

TEST_CASE("thermal wavelength at room temperature") {
  CHECK(thermal_wavelength(300.0) == rel_approx(7.63e-6).epsilon(0.01e-6 / 7.63e-6));
  CHECK(std::isinf(thermal_wavelength(0.0)));
  CHECK(thermal_wavelength(150.0) == rel_approx(2.0 * thermal_wavelength(300.0)));
}

TEST_CASE("thermal frequency") {
  CHECK(thermal_frequency(300.0) ==
        rel_approx(PhysicalConstants::c / thermal_wavelength(300.0)).epsilon(1e-14));
}

TEST_CASE("bose occupation") {
  const double w = thermal_frequency(300.0);
  CHECK(bose_occupation(w, 300.0) == rel_approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  CHECK(bose_occupation(w, 0.0) == 0.0);
  CHECK(bose_occupation(1000.0 * w, 300.0) == 0.0);
  // classical limit n ~ kT / (hbar w)
  CHECK(bose_occupation(1e-6 * w, 300.0) == rel_approx(1e6).epsilon(1e-6));
}

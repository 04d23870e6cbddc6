#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "approx.hpp"
#include "neqforce/constants.hpp"
#include "neqforce/dielectric.hpp"
#include "neqforce/errors.hpp"
#include "neqforce/material_io.hpp"
#include "neqforce/materials_response.hpp"

using namespace neqforce;

namespace {

constexpr double kUm = 1e-6;
constexpr double kUm3 = 1e-18;

DielectricModel single_line() { return DielectricModel::lorentz("line", 1.0, {{1e14, 3e28, 1e12}}); }

SphereSpec sphere_with(Complex eps, double radius = kUm) {
  SphereSpec s;
  s.radius = radius;
  s.dielectric = DielectricModel::constant("c", eps);
  return s;
}

DielectricModel sio2() { return load_material_file(materials_dir() / "sio2_surrogate.json"); }

}  // namespace

TEST_CASE("constant model") {
  const auto m = DielectricModel::constant("c", {4.0, 0.0});
  CHECK(epsilon(m, 1e10) == Complex(4.0, 0.0));
  CHECK(epsilon(m, 1e16) == Complex(4.0, 0.0));
}

TEST_CASE("lorentz static and high-frequency limits") {
  const auto m = single_line();
  CHECK(epsilon(m, 1e6).real() == rel_approx(4.0).epsilon(1e-12));
  CHECK(epsilon_imag_axis(m, 0.0) == rel_approx(4.0).epsilon(1e-14));
  CHECK(epsilon_imag_axis(m, 1e22) == rel_approx(1.0).epsilon(1e-10));
  const double mid = epsilon_imag_axis(m, 1e14);
  CHECK(mid > 1.0);
  CHECK(mid < 4.0);
  CHECK(epsilon_imag_axis_kramers_kronig(m, 1e14) == rel_approx(mid).epsilon(1e-7));
}

TEST_CASE("imaginary-axis permittivity decreases monotonically") {
  const auto m = sio2();
  double prev = epsilon_imag_axis(m, 0.0);
  for (double xi = 1e11; xi < 1e17; xi *= 1.5) {
    const double e = epsilon_imag_axis(m, xi);
    CHECK(e <= prev);
    CHECK(e >= 1.0);
    prev = e;
  }
}

TEST_CASE("Kramers-Kronig agrees with the closed form for the SiO2 surrogate") {
  const auto m = sio2();
  for (double xi : {1e12, 1e13, 1.5e14, 1e15}) {
    CHECK(epsilon_imag_axis_kramers_kronig(m, xi) ==
          rel_approx(epsilon_imag_axis(m, xi)).epsilon(1e-6));
  }
}

TEST_CASE("SiO2 surrogate static permittivity and resonances") {
  const auto m = sio2();
  const auto st = material_statics(m);
  CHECK(st.eps0 == rel_approx(3.7).epsilon(0.01));
  CHECK(st.lambda_in > 0.0);
  CHECK(lowest_resonance_wavelength(m) == rel_approx(22e-6).epsilon(1e-9));
  const auto hints = resonance_hints(m);
  CHECK(std::is_sorted(hints.begin(), hints.end()));
  CHECK(hints.size() >= 2);
}

TEST_CASE("SiC preset is a supported insulator") {
  const auto m = load_material_file(materials_dir() / "sic_spitzer.json");
  CHECK(material_statics(m).eps0 == rel_approx(10.0).epsilon(0.02));
  CHECK(peak_abs_epsilon(m) < kConductorThreshold);
  CHECK_NOTHROW(check_supported(m));
}

TEST_CASE("passivity of the presets") {
  for (const auto& m : {sio2(), load_material_file(materials_dir() / "sic_spitzer.json")}) {
    for (double w = 1e11; w < 1e17; w *= 1.07) {
      CHECK(epsilon(m, w).imag() >= 0.0);
      SphereSpec s;
      s.radius = kUm;
      s.dielectric = m;
      CHECK(polarizability(s, w).imag() >= 0.0);
    }
  }
}

TEST_CASE("static expansion examples") {
  SUBCASE("eps0 = 3.7") {
    const auto s = static_expansion(sphere_with({3.7, 0.0}));
    CHECK(s.alpha_i0 / kUm3 == rel_approx(0.09234).epsilon(1e-4));
    CHECK(s.alpha_i0 * (s.eps0 + 2.0) * (s.eps0 + 2.0) == rel_approx(3.0 * kUm3).epsilon(1e-15));
  }
  SUBCASE("eps0 = 4") {
    CHECK(static_expansion(sphere_with({4.0, 0.0})).alpha0 / kUm3 == rel_approx(0.5));
  }
  SUBCASE("vacuum sphere") {
    const auto s = static_expansion(sphere_with({1.0, 0.0}));
    CHECK(s.alpha0 == 0.0);
    CHECK(s.alpha_i0 / kUm3 == rel_approx(1.0 / 3.0));
  }
  SUBCASE("lambda_in of a Lorentz line matches the closed form") {
    SphereSpec s;
    s.radius = kUm;
    s.dielectric = single_line();
    // Im eps ~ strength * damping * w / w_r^4 as w -> 0
    const double expected = PhysicalConstants::c * 3e28 * 1e12 / std::pow(1e14, 4);
    CHECK(static_expansion(s).lambda_in == rel_approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("conductor-like models are rejected") {
  const auto metal = DielectricModel::lorentz("metal", 1.0, {{1e13, 1e32, 1e11}});
  CHECK_THROWS_AS(check_supported(metal), UnsupportedMaterial);
  SphereSpec s;
  s.radius = kUm;
  s.dielectric = metal;
  CHECK_THROWS_AS(static_expansion(s), UnsupportedMaterial);
  CHECK_THROWS_AS(s.validate(), UnsupportedMaterial);
}

TEST_CASE("polarizability examples") {
  CHECK(std::abs(polarizability(sphere_with({4.0, 0.0}), 1e14) / kUm3 - 0.5) < 1e-15);
  CHECK(polarizability(sphere_with({1.0, 0.0}), 1e14) == Complex(0.0, 0.0));
  const Complex eps(3.7, 0.1);
  const Complex a = polarizability(sphere_with(eps), 1e14);
  CHECK(a.imag() > 0.0);
  CHECK(a.imag() == rel_approx(3.0 * kUm3 * eps.imag() / std::norm(eps + 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(polarizability(sphere_with({-2.0, 0.0}), 1e14), PoleError);
}

TEST_CASE("magnetic polarizability") {
  SphereSpec s = sphere_with({4.0, 0.0});
  s.mu = {4.0, 0.0};
  CHECK(std::abs(magnetic_polarizability(s, 1e14) / kUm3 - 0.5) < 1e-15);
  s.mu = {1.0, 0.0};
  CHECK(magnetic_polarizability(s, 1e14) == Complex(0.0, 0.0));
}

TEST_CASE("dipole T-operator") {
  const double w = 2e14;
  const auto t = dipole_T(sphere_with({3.7, 0.1}), w);
  CHECK(t.magnetic == Complex(0.0, 0.0));
  const double k = w / PhysicalConstants::c;
  const double pref = 2.0 * k * k * k / 3.0;
  CHECK(t.electric.real() < 0.0);
  CHECK(t.electric.real() ==
        rel_approx(-pref * polarizability(sphere_with({3.7, 0.1}), w).imag()).epsilon(1e-14));
  CHECK(dipole_T(sphere_with({3.7, 0.0}), w).electric.real() == 0.0);
  const auto t2 = dipole_T(sphere_with({3.7, 0.1}, 2.0 * kUm), w);
  CHECK(std::abs(t2.electric / t.electric - 8.0) < 1e-13);
  SphereSpec mag = sphere_with({3.7, 0.1});
  mag.mu = {2.0, 0.5};
  CHECK(dipole_T(mag, w).magnetic != Complex(0.0, 0.0));
}

TEST_CASE("dipole validity warnings") {
  CHECK(dipole_validity_warnings(sphere_with({3.7, 0.1}, 0.01 * kUm), 300.0).empty());
  CHECK_FALSE(dipole_validity_warnings(sphere_with({3.7, 0.1}, 5.0 * kUm), 300.0).empty());
}

TEST_CASE("Fresnel coefficients at normal incidence") {
  PlateSpec p;
  p.dielectric = DielectricModel::constant("c", {4.0, 0.0});
  CHECK(std::abs(fresnel(p, 1e14, 0.0, Polarization::M) - Complex(-1.0 / 3.0, 0.0)) < 1e-14);
  CHECK(std::abs(fresnel(p, 1e14, 0.0, Polarization::N) - Complex(1.0 / 3.0, 0.0)) < 1e-14);
  p.dielectric = DielectricModel::constant("mirror", {1e8, 0.0});
  CHECK(fresnel(p, 1e14, 0.0, Polarization::M).real() == rel_approx(-1.0).epsilon(1e-3));
}

TEST_CASE("Fresnel evanescent value sits on the decaying branch") {
  PlateSpec p;
  p.dielectric = DielectricModel::constant("c", {2.0, 1.0});
  const double w = 1e14, k = w / PhysicalConstants::c;
  const Complex rm = fresnel(p, w, 2.0 * k, Polarization::M);
  const Complex rn = fresnel(p, w, 2.0 * k, Polarization::N);
  CHECK(std::isfinite(rm.real()));
  CHECK(std::isfinite(rn.imag()));
  const Complex km = branch_sqrt((Complex(2.0, 1.0) - 1.0) * k * k - 4.0 * k * k);
  CHECK(km.imag() >= 0.0);
}

TEST_CASE("Fresnel swap symmetry for random media") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Complex eps(1.0 + 9.0 * u(rng), 3.0 * u(rng));
    const Complex mu(1.0 + 3.0 * u(rng), 1.0 * u(rng));
    const double w = 1e13 * (1.0 + 99.0 * u(rng));
    const double k = w / PhysicalConstants::c;
    const double kp = 3.0 * k * u(rng);
    PlateSpec a, b;
    a.dielectric = DielectricModel::constant("a", eps);
    a.mu = mu;
    b.dielectric = DielectricModel::constant("b", mu);
    b.mu = eps;
    CHECK(fresnel(a, w, kp, Polarization::M) == fresnel(b, w, kp, Polarization::N));
    CHECK(fresnel(a, w, kp, Polarization::N) == fresnel(b, w, kp, Polarization::M));
  }
}

TEST_CASE("Fresnel continuity across the light line and passivity bound") {
  PlateSpec p;
  p.dielectric = sio2();
  for (double w : {5e13, 1.9e14, 3e14}) {
    const double k = w / PhysicalConstants::c;
    for (auto pol : {Polarization::M, Polarization::N}) {
      // the jump shrinks like sqrt(delta) as the straddle closes
      double jump = 0.0;
      for (double delta = 1e-6; delta > 1e-15; delta /= 4.0) {
        const double next = std::abs(fresnel(p, w, k * (1.0 - delta), pol) -
                                     fresnel(p, w, k * (1.0 + delta), pol));
        if (jump > 0.0) CHECK(next < 0.6 * jump);
        jump = next;
      }
      CHECK(jump < 1e-6);
      for (double f = 0.0; f < 1.0; f += 0.05) CHECK(std::abs(fresnel(p, w, f * k, pol)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("frequency scaling") {
  const auto m = sio2();
  const auto s = scale_frequency(m, 1.17);
  for (double w : {5e13, 1.2e14, 2e14}) {
    const Complex a = epsilon(s, w), b = epsilon(m, 1.17 * w);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
  }
  CHECK(lowest_resonance(s) == rel_approx(lowest_resonance(m) / 1.17));
  CHECK_THROWS_AS(scale_frequency(m, 0.0), ConfigError);
}

TEST_CASE("tabulated models") {
  std::vector<DielectricSample> samples;
  const auto ref = single_line();
  for (double w = 1e11; w < 1e17; w *= 1.001) {
    const Complex e = epsilon(ref, w);
    samples.push_back({w, e.real(), e.imag()});
  }
  const auto tab = DielectricModel::tabulated("tab", samples);
  CHECK(std::abs(epsilon(tab, 3.3e13) - epsilon(ref, 3.3e13)) < 1e-3);
  CHECK_THROWS_AS(epsilon(tab, 1e10), RangeError);
  CHECK_THROWS_AS(epsilon(tab, 1e18), RangeError);
  try {
    epsilon(tab, 1e10);
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("below tabulated minimum") != std::string::npos);
  }
  CHECK(epsilon_imag_axis(tab, 1e14) == rel_approx(epsilon_imag_axis(ref, 1e14)).epsilon(2e-3));
  CHECK(material_statics(tab).eps0 == rel_approx(4.0).epsilon(1e-3));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(DielectricModel::lorentz("bad", 0.5, {}), ConfigError);
  CHECK_THROWS_AS(DielectricModel::lorentz("bad", 1.0, {{-1.0, 1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(DielectricModel::constant("bad", {2.0, -0.1}), ConfigError);
  CHECK_THROWS_AS(DielectricModel::tabulated("bad", {{2.0, 1.0, 0.0}, {1.0, 1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(DielectricModel::tabulated("bad", {{1.0, 1.0, 0.0}, {2.0, 1.0, -1.0}}), ConfigError);
}

TEST_CASE("material files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "neqforce_material_test";
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "data.csv");
    csv << "omega_rad_s,eps_re,eps_im\n# comment\n1e13,2.0,0.1\n1e14,3.0,0.2\n1e15,1.5,0.0\n";
  }
  const nlohmann::json tab = {{"name", "t"}, {"type", "tabulated"}, {"file", "data.csv"}};
  const auto m = material_from_json(tab, dir);
  CHECK(epsilon(m, 1e14) == Complex(3.0, 0.2));
  const nlohmann::json constant = {{"type", "constant"}, {"eps", {4.0, 0.5}}};
  CHECK(epsilon(resolve_material(constant, dir), 1e14) == Complex(4.0, 0.5));
  CHECK_THROWS_AS(resolve_material("no_such_material", dir), ConfigError);
  CHECK_THROWS_AS(material_from_json({{"type", "drude"}}, dir), ConfigError);
  const nlohmann::json shifted = {{"name", "sio2_surrogate"}, {"frequency_scale", 1.17}};
  CHECK(lowest_resonance(resolve_material(shifted, dir)) ==
        rel_approx(lowest_resonance(sio2()) / 1.17));
  fs::remove_all(dir);
}

TEST_CASE("materials directory from the environment") {
  setenv("NEQFORCE_MATERIALS_DIR", "/tmp/elsewhere", 1);
  CHECK(materials_dir() == std::filesystem::path("/tmp/elsewhere"));
  unsetenv("NEQFORCE_MATERIALS_DIR");
  CHECK(std::filesystem::exists(materials_dir() / "sio2_surrogate.json"));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "approx.hpp"
#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"
#include "neqforce/material_io.hpp"
#include "neqforce/sphere_plate.hpp"
#include "trapezoid_oracle.hpp"

using namespace neqforce;

namespace {

using C = PhysicalConstants;
constexpr double kUm = 1e-6;

DielectricModel sio2() { return load_material_file(materials_dir() / "sio2_surrogate.json"); }

SpherePlateSystem sio2_system(double d, double ts, double tp, double t_env) {
  SpherePlateSystem s;
  s.sphere.radius = kUm;
  s.sphere.dielectric = sio2();
  s.sphere.temperature = ts;
  s.plate.dielectric = sio2();
  s.plate.temperature = tp;
  s.separation = d;
  s.T_env = t_env;
  return s;
}

// Reflection coefficients in terms of the in-plane wave number, written out
// directly: kz = sqrt(k^2 - kp^2), km = sqrt(eps mu k^2 - kp^2), Im >= 0.
struct Refl {
  Complex m, n, kz;
};

Complex upper_sqrt(Complex z) {
  Complex s = std::sqrt(z);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
  return s;
}

Refl refl(const PlateSpec& p, double w, double kp) {
  const double k = w / C::c;
  const Complex eps = epsilon(p.dielectric, w);
  const Complex kz = upper_sqrt(Complex(k * k - kp * kp, 0.0));
  const Complex km = upper_sqrt(eps * p.mu * k * k - kp * kp);
  return {(p.mu * kz - km) / (p.mu * kz + km), (eps * kz - km) / (eps * kz + km), kz};
}

Complex t_electric(const SphereSpec& s, double w) {
  const double k = w / C::c;
  return Complex(0, 2.0 * k * k * k / 3.0) * polarizability(s, w);
}

struct OracleSource {
  double propagating, evanescent;
};

// kp = k - t^2 below the light line and k + t^2 above it, which removes the
// square-root kink of kz at kp = k.
double below_light_line(const std::function<double(double, Complex)>& f, double k, long n) {
  return trapezoid_richardson(
      [&](double t) {
        const double kp = k - t * t;
        return 2.0 * t * f(kp, Complex(std::sqrt(std::max(0.0, k * k - kp * kp)), 0.0));
      },
      0.0, std::sqrt(k), n);
}

double above_light_line(const std::function<double(double, Complex)>& f, double k, double kp_max,
                        long n) {
  return trapezoid_richardson(
      [&](double t) {
        const double kp = k + t * t;
        return 2.0 * t * f(kp, Complex(0.0, std::sqrt(std::max(0.0, kp * kp - k * k))));
      },
      0.0, std::sqrt(kp_max - k), n);
}

OracleSource plate_source_oracle(const SpherePlateSystem& s, double T, double cutoff) {
  const double w_max = cutoff * thermal_frequency(T);
  const double w_min = 1e-9 * w_max;
  const double d = s.separation;
  const double pref = 3.0 * C::hbar / (2.0 * C::c * kPi);
  const auto fpr = [&](double w) {
    w = std::max(w, w_min);
    const double k = w / C::c;
    const double inner = trapezoid(
        [&](double kp) {
          const Refl r = refl(s.plate, w, kp);
          return kp * ((1.0 - std::norm(r.m)) + (1.0 - std::norm(r.n)));
        },
        0.0, k, 4000);
    return w * bose_occupation(w, T) * inner / (k * k) * t_electric(s.sphere, w).real();
  };
  const auto fev = [&](double w) {
    w = std::max(w, w_min);
    const double k = w / C::c;
    const double kp_max = std::sqrt(k * k + std::pow(cutoff / (2.0 * d), 2));
    const double im_t = t_electric(s.sphere, w).imag();
    const double inner = above_light_line(
        [&](double kp, Complex) {
          const Refl r = refl(s.plate, w, kp);
          const double g = 2.0 * kp * kp / (k * k) - 1.0;
          return kp * std::exp(-2.0 * d * std::sqrt(kp * kp - k * k)) * (r.n * g + r.m).imag();
        },
        k, kp_max, 2000);
    return w * bose_occupation(w, T) * 2.0 * inner / (k * k) * im_t;
  };
  return {pref * trapezoid_richardson(fpr, 0.0, w_max, 3000),
          pref * trapezoid_richardson(fev, 0.0, w_max, 3000)};
}

double self_force_oracle(const SpherePlateSystem& s, double T, double cutoff) {
  const double w_max = cutoff * thermal_frequency(T);
  const double w_min = 1e-9 * w_max;
  const double d = s.separation;
  const Complex i(0, 1);
  const auto f = [&](double w) {
    w = std::max(w, w_min);
    const double k = w / C::c;
    const auto kernel = [&](double kp, Complex kz) {
      const Refl r = refl(s.plate, w, kp);
      const double g = 2.0 * kp * kp / (k * k) - 1.0;
      return kp * (std::exp(2.0 * i * d * kz) * (r.n * g + r.m)).real();
    };
    const double kp_max = std::sqrt(k * k + std::pow(cutoff / (2.0 * d), 2));
    const double inner = below_light_line(kernel, k, 2000) + above_light_line(kernel, k, kp_max, 2000);
    return t_electric(s.sphere, w).real() * bose_occupation(w, T) / w * inner;
  };
  return -3.0 * C::hbar * C::c / kPi * trapezoid_richardson(f, 0.0, w_max, 3000);
}

}  // namespace

TEST_CASE("system validation and warnings") {
  auto s = sio2_system(0.8 * kUm, 0, 0, 0);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.separation = 2 * kUm;
  CHECK_NOTHROW(s.validate());
  CHECK_FALSE(s.warnings().empty());
  s.separation = 5 * kUm;
  CHECK(s.warnings().empty());
  s.plate.temperature = -3.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK(s.at_separation(9 * kUm).separation == 9 * kUm);
}

TEST_CASE("zero temperature sources vanish") {
  QuadratureSettings q;
  const auto s = sio2_system(10 * kUm, 0, 0, 0);
  const auto p = plate_source_force(s, 0.0, q);
  CHECK(p.propagating.value == 0.0);
  CHECK(p.evanescent.value == 0.0);
  CHECK(sphere_self_force(s, 0.0, q).value == 0.0);
}

TEST_CASE("far-field transmission weight") {
  PlateSpec p;
  const double w = 1e14;
  p.dielectric = DielectricModel::constant("vacuum", {1.0, 0.0});
  CHECK(propagating_geometric_factor(p, w) == rel_approx(1.0).epsilon(1e-9));
  p.dielectric = DielectricModel::constant("mirror", {1e8, 0.0});
  const double mirror = propagating_geometric_factor(p, w);
  CHECK(mirror >= 0.0);
  CHECK(mirror < 1e-3);
  p.dielectric = DielectricModel::constant("glass", {4.0, 0.0});
  const double glass = propagating_geometric_factor(p, w);
  CHECK(glass > mirror);
  CHECK(glass < 1.0);
}

TEST_CASE("propagating part does not depend on the separation") {
  QuadratureSettings q;
  const auto near = plate_source_force(sio2_system(10 * kUm, 0, 300, 0), 300.0, q);
  const auto far = plate_source_force(sio2_system(100 * kUm, 0, 300, 0), 300.0, q);
  CHECK(near.propagating.value == rel_approx(far.propagating.value).epsilon(1e-12));
  CHECK(near.propagating.value < 0.0);
  CHECK(std::abs(near.evanescent.value) > std::abs(far.evanescent.value));
}

TEST_CASE("plate source against a trapezoid oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QuadratureSettings q;
  q.rel_tol = 1e-4;
  q.abs_floor = 0.0;
  for (int i = 0; i < 3; ++i) {
    SpherePlateSystem s;
    const double w0 = 8e13 + 1.5e14 * u(rng);
    s.sphere.radius = (0.1 + 0.5 * u(rng)) * kUm;
    s.sphere.dielectric =
        DielectricModel::lorentz("random", 1.0 + u(rng), {{w0, (0.3 + u(rng)) * w0 * w0, 0.1 * w0}});
    // a broad line keeps the plate lossy over the whole thermal band; Im eps must
    // still vanish at w -> 0 or the near-field part diverges
    const double wp = 5e13 + 2e14 * u(rng);
    s.plate.dielectric =
        i == 0 ? sio2()
               : DielectricModel::lorentz("lossy", 1.0 + 2.0 * u(rng), {{wp, (1.0 + 3.0 * u(rng)) * wp * wp, 0.5 * wp}});
    s.separation = (3.0 + 20.0 * u(rng)) * kUm;
    const double T = 150.0 + 300.0 * u(rng);
    CAPTURE(i);
    const auto got = plate_source_force(s, T, q);
    const auto ref = plate_source_oracle(s, T, q.bose_cutoff_x);
    CHECK(got.propagating.value == rel_approx(ref.propagating).epsilon(5.0 * q.rel_tol));
    CHECK(got.evanescent.value == rel_approx(ref.evanescent).epsilon(5.0 * q.rel_tol));
  }
}

TEST_CASE("plate loss that survives at zero frequency is reported as divergent") {
  auto s = sio2_system(10 * kUm, 0, 300, 0);
  s.plate.dielectric = DielectricModel::constant("flat loss", {3.0, 0.5});
  CHECK_THROWS_AS(plate_source_force(s, 300.0, QuadratureSettings{}), DivergenceError);
  // lossless, but Im r is finite between k and sqrt(eps) k: a regular, nonzero result
  s.plate.dielectric = DielectricModel::constant("lossless", {3.0, 0.0});
  const auto lossless = plate_source_force(s, 300.0, QuadratureSettings{});
  CHECK(std::isfinite(lossless.evanescent.value));
  CHECK(lossless.evanescent.converged);
}

TEST_CASE("self force against a trapezoid oracle") {
  QuadratureSettings q;
  q.rel_tol = 1e-4;
  q.abs_floor = 0.0;
  for (double d : {4.0, 9.0}) {
    const auto s = sio2_system(d * kUm, 300, 0, 0);
    CAPTURE(d);
    const double got = sphere_self_force(s, 300.0, q).value;
    CHECK(got == rel_approx(self_force_oracle(s, 300.0, q.bose_cutoff_x)).epsilon(5.0 * q.rel_tol));
  }
}

TEST_CASE("self force vanishes without loss or reflection") {
  QuadratureSettings q;
  auto s = sio2_system(10 * kUm, 300, 0, 0);
  s.sphere.dielectric = DielectricModel::constant("lossless", {3.7, 0.0});
  CHECK(sphere_self_force(s, 300.0, q).value == 0.0);
  auto v = sio2_system(10 * kUm, 300, 0, 0);
  v.plate.dielectric = DielectricModel::constant("vacuum", {1.0, 0.0});
  CHECK(sphere_self_force(v, 300.0, q).value == 0.0);
  CHECK(plate_source_force(v, 300.0, q).evanescent.value == 0.0);
}

TEST_CASE("equilibrium force") {
  QuadratureSettings q;
  SUBCASE("no reflection") {
    auto s = sio2_system(10 * kUm, 0, 0, 0);
    s.plate.dielectric = DielectricModel::constant("vacuum", {1.0, 0.0});
    CHECK(equilibrium_force(s, 300.0, q).value == 0.0);
    CHECK(equilibrium_force(s, 0.0, q).value == 0.0);
  }
  SUBCASE("attractive") {
    for (double d : {3.0, 10.0, 50.0}) {
      CHECK(equilibrium_force(sio2_system(d * kUm, 0, 0, 0), 300.0, q).value > 0.0);
      CHECK(equilibrium_force(sio2_system(d * kUm, 0, 0, 0), 0.0, q).value > 0.0);
    }
  }
  SUBCASE("thermal long distance limit") {
    const double T = 300.0;
    const double lt = thermal_wavelength(T);
    auto s = sio2_system(100 * lt, 0, 0, 0);
    s.plate.dielectric = DielectricModel::constant("eps37", {3.7, 0.0});
    s.sphere.dielectric = DielectricModel::constant("eps4", {4.0, 0.0});
    const double d = s.separation;
    const double a0 = 0.5 * std::pow(kUm, 3);
    const double expected = 3.0 * C::hbar * C::c / (4.0 * std::pow(d, 4) * lt) * (2.7 / 4.7) * a0;
    CHECK(equilibrium_force(s, T, q).value == rel_approx(expected).epsilon(0.03));
  }
}

TEST_CASE("decomposition of the total force") {
  QuadratureSettings q;
  SUBCASE("equal temperatures") {
    const auto b = total_force_on_sphere(sio2_system(10 * kUm, 300, 300, 300), q);
    CHECK(b.total == b.equilibrium);
    CHECK(b.interaction_from_other == 0.0);
    CHECK(b.self_emission == 0.0);
  }
  SUBCASE("sum of the parts") {
    const auto s = sio2_system(10 * kUm, 300, 200, 100);
    const auto b = total_force_on_sphere(s, q);
    REQUIRE(b.plate_source.has_value());
    CHECK(b.interaction_from_other == b.plate_source->propagating + b.plate_source->evanescent);
    CHECK(b.total == b.equilibrium + b.interaction_from_other + b.self_emission);
    const auto hot = plate_source_force(s, 200.0, q);
    const auto env = plate_source_force(s, 100.0, q);
    CHECK(b.plate_source->propagating == hot.propagating.value - env.propagating.value);
    CHECK(b.self_emission ==
          sphere_self_force(s, 300.0, q).value - sphere_self_force(s, 100.0, q).value);
  }
}

TEST_CASE("far from the plate the force saturates") {
  QuadratureSettings q;
  SUBCASE("hot plate in a cold environment repels") {
    const double f1 = total_force_on_sphere(sio2_system(40 * kUm, 0, 300, 0), q).total;
    const double f2 = total_force_on_sphere(sio2_system(400 * kUm, 0, 300, 0), q).total;
    CHECK(f1 < 0.0);
    CHECK(f2 == rel_approx(f1).epsilon(0.02));
  }
  SUBCASE("cold plate in a warm environment attracts") {
    const double f1 = total_force_on_sphere(sio2_system(40 * kUm, 300, 0, 300), q).total;
    const double f2 = total_force_on_sphere(sio2_system(400 * kUm, 300, 0, 300), q).total;
    CHECK(f1 > 0.0);
    CHECK(f2 == rel_approx(f1).epsilon(0.02));
  }
}

TEST_CASE("self force oscillates with the sphere's own mode") {
  // one sharp line facing a dispersion-free reflector; the zeros are a quarter
  // wavelength apart at the mode where Re eps = -2, w0 sqrt(1 + S / (3 w0^2))
  QuadratureSettings q;
  q.rel_tol = 1e-4;
  q.abs_floor = 0.0;
  const double w0 = 2e14, strength = 0.5;
  SpherePlateSystem s;
  s.sphere.radius = 0.1 * kUm;
  s.sphere.temperature = 300.0;
  s.sphere.dielectric = DielectricModel::lorentz("sharp", 1.0, {{w0, strength * w0 * w0, 0.003 * w0}});
  s.plate.dielectric = DielectricModel::constant("glass", {4.0, 0.0});
  std::vector<double> zeros;
  double prev_d = 0.0, prev_f = 0.0;
  for (double d = 20 * kUm; d <= 40 * kUm; d += 0.2 * kUm) {
    const double f = sphere_self_force(s.at_separation(d), 300.0, q).value;
    if (prev_d > 0.0 && f * prev_f < 0.0) zeros.push_back(prev_d - prev_f * (d - prev_d) / (f - prev_f));
    prev_d = d;
    prev_f = f;
  }
  REQUIRE(zeros.size() >= 6);
  const double spacing = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);
  const double mode = w0 * std::sqrt(1.0 + strength / 3.0);
  CHECK(2.0 * spacing == rel_approx(kPi * C::c / mode).epsilon(0.01));
}

#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace neqforce {

using Complex = std::complex<double>;

/// One damped harmonic oscillator: strength / (omega_res^2 - w^2 - i damping w).
struct LorentzOscillator {
  double omega_res;  // rad/s
  double strength;   // (rad/s)^2
  double damping;    // rad/s
};

struct LorentzSet {
  double eps_inf = 1.0;
  std::vector<LorentzOscillator> oscillators;
};

struct DielectricSample {
  double omega;  // rad/s
  double eps_re;
  double eps_im;
};

/// Optical data on a strictly increasing frequency grid, interpolated
/// linearly in log(omega).
struct Tabulated {
  std::vector<DielectricSample> samples;
};

struct Constant {
  Complex eps;
};

/// Complex permittivity eps(omega); value type, cheap to copy for Lorentz/Constant.
struct DielectricModel {
  std::string name;
  std::variant<LorentzSet, Tabulated, Constant> form;

  static DielectricModel lorentz(std::string name, double eps_inf,
                                 std::vector<LorentzOscillator> oscillators);
  static DielectricModel tabulated(std::string name, std::vector<DielectricSample> samples);
  static DielectricModel constant(std::string name, Complex eps);

  /// Throws ConfigError if the invariants of the active form are violated.
  void validate() const;
};

/// eps(omega) for omega > 0. Tabulated models throw RangeError outside the grid.
Complex epsilon(const DielectricModel& model, double omega);

/// eps(i xi), real. Closed form for Lorentz/Constant, Kramers-Kronig quadrature
/// of Im eps for Tabulated.
double epsilon_imag_axis(const DielectricModel& model, double xi);

/// Kramers-Kronig transform 1 + (2/pi) int w Im eps(w) / (w^2 + xi^2) dw,
/// usable on any model (the oracle for the Lorentz closed form).
double epsilon_imag_axis_kramers_kronig(const DielectricModel& model, double xi,
                                        double rel_tol = 1e-9);

/// Model with eps~(w) = eps(scale * w). Lorentz and tabulated parameters are
/// rescaled in place, so the result stays in the same family.
DielectricModel scale_frequency(const DielectricModel& model, double scale);

/// Frequencies where the response has sharp structure: oscillator positions
/// (with +-2 damping), and roots of Re eps = -1 and Re eps = -2 (plate and
/// sphere surface modes). Sorted, used to seed quadrature breakpoints.
std::vector<double> resonance_hints(const DielectricModel& model);

/// Lowest characteristic resonance frequency (rad/s); 0 for a constant model.
double lowest_resonance(const DielectricModel& model);

/// 2 pi c / lowest_resonance; 0 when the model has no resonance.
double lowest_resonance_wavelength(const DielectricModel& model);

/// Largest |eps| on the real axis at the model's resonances (or over the grid).
double peak_abs_epsilon(const DielectricModel& model);

}  // namespace neqforce

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace neqforce {

using Complex = std::complex<double>;

struct QuadratureSettings {
  double rel_tol = 1e-6;
  /// Absolute error floor in the units of the quantity being computed. Force
  /// routines interpret it in newtons and rescale it to their integrals.
  double abs_floor = 1e-30;
  /// Bose-weighted integrals stop at hbar w / k_B T = bose_cutoff_x; damped
  /// integrals stop where the exponent reaches the same value.
  double bose_cutoff_x = 60.0;
  /// Bisections allowed beyond the initial partition.
  int max_subdivisions = 20000;
  double matsubara_tail_tol = 1e-9;

  /// Throws ConfigError unless rel_tol > 0 and bose_cutoff_x >= 20.
  void validate() const;
};

template <typename V>
struct IntegralResult {
  V value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

using RealResult = IntegralResult<double>;
using ComplexResult = IntegralResult<Complex>;

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<Complex(double)>;

/// Stopping rule for the adaptive core: the summed error estimate must fall
/// below max(rel * |I|, abs, l1_rel * int |f|).
struct AdaptiveTolerance {
  double rel = 1e-6;
  double abs = 0.0;
  double l1_rel = 0.0;
  int max_subdivisions = 20000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over the partition
/// given by `breakpoints` (sorted and deduplicated internally; at least two
/// distinct points). Interval sums are accumulated with compensation in
/// positional order, so the result does not depend on refinement order.
RealResult integrate_adaptive(const RealFn& f, std::vector<double> breakpoints,
                              const AdaptiveTolerance& tol);
ComplexResult integrate_adaptive(const ComplexFn& f, std::vector<double> breakpoints,
                                 const AdaptiveTolerance& tol);

/// Same core, with the initial partition made of equal segments of
/// `segment_length` on [lo, hi] plus the extra breakpoints.
RealResult integrate_segmented(const RealFn& f, double lo, double hi, double segment_length,
                               std::span<const double> extra_breakpoints,
                               const AdaptiveTolerance& tol);
ComplexResult integrate_segmented(const ComplexFn& f, double lo, double hi,
                                  double segment_length,
                                  std::span<const double> extra_breakpoints,
                                  const AdaptiveTolerance& tol);

/// int_0^inf f(w) n(w, T) dw, truncated at w_max = bose_cutoff_x k_B T / hbar.
/// T = 0 returns exactly zero without calling f. `resonances` seeds breakpoints.
RealResult bose_weighted_integral(const RealFn& f, double temperature,
                                  const QuadratureSettings& settings,
                                  std::span<const double> resonances = {});

/// int_0^{omega_max} g(w) exp(i w phase_scale) dw, split into half-period
/// segments of length pi / phase_scale.
ComplexResult oscillatory_tail_integral(const ComplexFn& g, double phase_scale,
                                        double omega_max, const QuadratureSettings& settings,
                                        std::span<const double> resonances = {});

/// int_0^{q_max} h(q) dq with q_max = bose_cutoff_x / q_scale. `h` carries its
/// own exp(-q_scale q) damping.
RealResult evanescent_integral(const RealFn& h, double q_scale,
                               const QuadratureSettings& settings,
                               std::span<const double> breakpoints = {});

/// k_B T [g(0)/2 + sum_{n>=1} g(xi_n)], xi_n = 2 pi n k_B T / hbar. Stops once
/// a term drops below matsubara_tail_tol times the partial sum; the geometric
/// tail bound goes into error_estimate. Throws DivergenceError on growth over
/// five consecutive terms.
RealResult matsubara_sum(const RealFn& g, double temperature, const QuadratureSettings& settings,
                         std::size_t max_terms = 10'000'000);

/// Neumaier-compensated accumulator.
template <typename V>
class CompensatedSum {
 public:
  void add(V x);
  V value() const { return sum_ + comp_; }

 private:
  V sum_{};
  V comp_{};
};

template <>
void CompensatedSum<double>::add(double x);
template <>
void CompensatedSum<Complex>::add(Complex x);

}  // namespace neqforce

#include "neqforce/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol", "must be > 0");
  if (!(abs_floor >= 0.0)) throw ConfigError("quadrature.abs_floor", "must be >= 0");
  if (!(bose_cutoff_x >= 20.0)) throw ConfigError("quadrature.bose_cutoff_x", "must be >= 20");
  if (max_subdivisions < 0) throw ConfigError("quadrature.max_subdivisions", "must be >= 0");
  if (!(matsubara_tail_tol > 0.0)) {
    throw ConfigError("quadrature.matsubara_tail_tol", "must be > 0");
  }
}

namespace {

void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

}  // namespace

template <>
void CompensatedSum<double>::add(double x) {
  neumaier_add(sum_, comp_, x);
}

template <>
void CompensatedSum<Complex>::add(Complex x) {
  double sr = sum_.real(), si = sum_.imag(), cr = comp_.real(), ci = comp_.imag();
  neumaier_add(sr, cr, x.real());
  neumaier_add(si, ci, x.imag());
  sum_ = Complex(sr, si);
  comp_ = Complex(cr, ci);
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <typename V>
struct Interval {
  double a;
  double b;
  V value;
  double error;
  double resabs;
  bool refinable;
};

// QUADPACK qk15 with its error heuristic; `refinable` is false once the
// estimate sits on the roundoff floor or the interval cannot be split.
template <typename V, typename F>
Interval<V> kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<V, 15> fv;
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  V resk = fv[7] * kWgk[7];
  V resg = fv[7] * kWg[3];
  double resabs = std::abs(fv[7]) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const V pair = fv[j] + fv[14 - j];
    resk += pair * kWgk[j];
    resabs += (std::abs(fv[j]) + std::abs(fv[14 - j])) * kWgk[j];
    if (j % 2 == 1) resg += pair * kWg[j / 2];
  }
  const V mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  const double scale = std::abs(half);
  resasc *= scale;
  resabs *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double roundoff = 50.0 * kEps * resabs;
  bool refinable = true;
  if (err <= roundoff) {
    err = roundoff;
    refinable = false;
  }
  if (!std::isfinite(err)) refinable = false;
  if (half <= 100.0 * kEps * std::max(std::abs(a), std::abs(b))) refinable = false;
  return {a, b, resk * half, err, resabs, refinable};
}

template <typename V, typename F>
IntegralResult<V> adaptive_core(const F& f, std::vector<double> bp, const AdaptiveTolerance& tol) {
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  IntegralResult<V> out;
  if (bp.size() < 2) return out;

  std::vector<Interval<V>> cells;
  cells.reserve(bp.size() * 2);
  std::vector<char> alive;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;

  V total{};
  double total_err = 0.0;
  double total_abs = 0.0;
  auto push = [&](Interval<V> cell) {
    total += cell.value;
    total_err += cell.error;
    total_abs += cell.resabs;
    cells.push_back(cell);
    alive.push_back(1);
    if (cell.refinable) heap.emplace(cell.error, cells.size() - 1);
  };
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) push(kronrod15<V>(f, bp[i], bp[i + 1]));
  out.evaluations = 15 * cells.size();

  auto resum = [&] {
    total = V{};
    total_err = 0.0;
    total_abs = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!alive[i]) continue;
      total += cells[i].value;
      total_err += cells[i].error;
      total_abs += cells[i].resabs;
    }
  };

  int splits = 0;
  bool converged = false;
  for (;;) {
    const double target =
        std::max({tol.rel * std::abs(total), tol.abs, tol.l1_rel * total_abs});
    if (total_err <= target) {
      resum();
      const double target2 =
          std::max({tol.rel * std::abs(total), tol.abs, tol.l1_rel * total_abs});
      if (total_err <= target2) {
        converged = true;
        break;
      }
    }
    if (heap.empty()) break;
    if (splits >= tol.max_subdivisions) break;
    const std::size_t idx = heap.top().second;
    heap.pop();
    const Interval<V> cell = cells[idx];
    alive[idx] = 0;
    total -= cell.value;
    total_err -= cell.error;
    total_abs -= cell.resabs;
    const double mid = 0.5 * (cell.a + cell.b);
    push(kronrod15<V>(f, cell.a, mid));
    push(kronrod15<V>(f, mid, cell.b));
    out.evaluations += 30;
    if (++splits % 256 == 0) resum();
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (alive[i]) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return cells[l].a < cells[r].a; });
  CompensatedSum<V> sum;
  double err = 0.0;
  for (auto i : order) {
    sum.add(cells[i].value);
    err += cells[i].error;
  }
  out.value = sum.value();
  out.error_estimate = err;
  out.converged = converged && std::isfinite(std::abs(out.value));
  return out;
}

std::vector<double> segment_partition(double lo, double hi, double segment_length,
                                      std::span<const double> extra) {
  std::vector<double> bp{lo, hi};
  if (segment_length > 0.0 && std::isfinite(segment_length)) {
    const double count = std::floor((hi - lo) / segment_length);
    if (count > 5e7) throw Error("integrate_segmented: too many segments requested");
    for (double k = 1; k <= count; k += 1.0) {
      const double x = lo + k * segment_length;
      if (x < hi) bp.push_back(x);
    }
  }
  for (double x : extra)
    if (x > lo && x < hi) bp.push_back(x);
  return bp;
}

}  // namespace

RealResult integrate_adaptive(const RealFn& f, std::vector<double> breakpoints,
                              const AdaptiveTolerance& tol) {
  return adaptive_core<double>(f, std::move(breakpoints), tol);
}

ComplexResult integrate_adaptive(const ComplexFn& f, std::vector<double> breakpoints,
                                 const AdaptiveTolerance& tol) {
  return adaptive_core<Complex>(f, std::move(breakpoints), tol);
}

RealResult integrate_segmented(const RealFn& f, double lo, double hi, double segment_length,
                               std::span<const double> extra, const AdaptiveTolerance& tol) {
  return adaptive_core<double>(f, segment_partition(lo, hi, segment_length, extra), tol);
}

ComplexResult integrate_segmented(const ComplexFn& f, double lo, double hi,
                                  double segment_length, std::span<const double> extra,
                                  const AdaptiveTolerance& tol) {
  return adaptive_core<Complex>(f, segment_partition(lo, hi, segment_length, extra), tol);
}

namespace {

AdaptiveTolerance tolerance_from(const QuadratureSettings& s) {
  return {s.rel_tol, s.abs_floor, 0.0, s.max_subdivisions};
}

// Breakpoints at octaves of the natural scale, so the first pass already
// resolves the low end where most integrands peak.
std::vector<double> octave_breakpoints(double scale, double upper) {
  std::vector<double> bp{0.0, upper};
  for (double x = scale / 8.0; x < upper; x *= 2.0) bp.push_back(x);
  return bp;
}

}  // namespace

RealResult bose_weighted_integral(const RealFn& f, double temperature,
                                  const QuadratureSettings& settings,
                                  std::span<const double> resonances) {
  if (temperature <= 0.0) return {};
  const double omega_t = thermal_frequency(temperature);
  const double omega_max = settings.bose_cutoff_x * omega_t;
  auto bp = octave_breakpoints(omega_t, omega_max);
  for (double w : resonances)
    if (w > 0.0 && w < omega_max) bp.push_back(w);
  const auto weighted = [&](double w) { return f(w) * bose_occupation(w, temperature); };
  return integrate_adaptive(RealFn(weighted), std::move(bp), tolerance_from(settings));
}

ComplexResult oscillatory_tail_integral(const ComplexFn& g, double phase_scale,
                                        double omega_max, const QuadratureSettings& settings,
                                        std::span<const double> resonances) {
  if (!(phase_scale >= 0.0)) throw Error("oscillatory_tail_integral: phase_scale must be >= 0");
  const auto integrand = [&](double w) {
    return g(w) * Complex(std::cos(phase_scale * w), std::sin(phase_scale * w));
  };
  const double segment = phase_scale > 0.0 ? kPi / phase_scale : 0.0;
  std::vector<double> extra(resonances.begin(), resonances.end());
  if (segment == 0.0 || segment > omega_max) {
    for (double x = omega_max / 64.0; x < omega_max; x += omega_max / 64.0) extra.push_back(x);
  }
  return integrate_segmented(ComplexFn(integrand), 0.0, omega_max, segment, extra,
                             tolerance_from(settings));
}

RealResult evanescent_integral(const RealFn& h, double q_scale, const QuadratureSettings& settings,
                               std::span<const double> breakpoints) {
  if (!(q_scale > 0.0)) throw Error("evanescent_integral: q_scale must be > 0");
  const double q_max = settings.bose_cutoff_x / q_scale;
  auto bp = octave_breakpoints(1.0 / q_scale, q_max);
  for (double q : breakpoints)
    if (q > 0.0 && q < q_max) bp.push_back(q);
  return integrate_adaptive(h, std::move(bp), tolerance_from(settings));
}

RealResult matsubara_sum(const RealFn& g, double temperature, const QuadratureSettings& settings,
                         std::size_t max_terms) {
  if (!(temperature > 0.0)) throw Error("matsubara_sum: temperature must be > 0");
  const double kT = PhysicalConstants::k_B * temperature;
  const double spacing = 2.0 * kPi * thermal_frequency(temperature);
  RealResult out;
  CompensatedSum<double> sum;
  sum.add(0.5 * g(0.0));
  out.evaluations = 1;
  double prev = std::numeric_limits<double>::infinity();
  int growth = 0;
  bool done = false;
  double last = 0.0;
  double ratio = 1.0;
  for (std::size_t n = 1; n <= max_terms; ++n) {
    const double term = g(spacing * static_cast<double>(n));
    ++out.evaluations;
    if (!std::isfinite(term)) throw DivergenceError("matsubara_sum: non-finite term");
    sum.add(term);
    const double mag = std::abs(term);
    if (std::isfinite(prev) && mag > prev * (1.0 + 1e-12) && mag > 0.0) {
      if (++growth >= 5) throw DivergenceError("matsubara_sum: terms grow with n");
    } else {
      growth = 0;
    }
    ratio = (std::isfinite(prev) && prev > 0.0) ? mag / prev : 1.0;
    prev = mag;
    last = mag;
    const double partial = std::abs(sum.value());
    // underflowed term after a nonzero partial sum: the exponential tail is exhausted
    if (mag == 0.0 && partial > 0.0) {
      ratio = 0.0;
      done = true;
      break;
    }
    if (mag <= settings.matsubara_tail_tol * partial && ratio < 1.0) {
      done = true;
      break;
    }
    if (mag == 0.0 && partial == 0.0 && n >= 8) {
      done = true;
      break;
    }
  }
  const double tail = (done && ratio < 1.0) ? last * ratio / (1.0 - ratio) : last;
  out.value = kT * sum.value();
  out.error_estimate = kT * tail;
  out.converged = done;
  return out;
}

}  // namespace neqforce

#include "neqforce/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

double interpolate_root(double x0, double f0, double x1, double f1) {
  if (f0 == f1) return 0.5 * (x0 + x1);
  return x0 - f0 * (x1 - x0) / (f1 - f0);
}

// Bracketing interval [lo, hi] refined until (hi - lo) <= rel_tol * lo. `eval`
// returns the bracketed function and may fill auxiliary values.
struct Bracket {
  double lo, hi, f_lo, f_hi;
};

template <typename Eval>
Bracket bisect(Bracket b, double rel_tol, Eval&& eval) {
  const int s_lo = sign_of(b.f_lo);
  for (int iter = 0; iter < 200 && (b.hi - b.lo) > rel_tol * b.lo; ++iter) {
    const double mid = 0.5 * (b.lo + b.hi);
    const double fm = eval(mid);
    if (!std::isfinite(fm)) break;
    if (fm == 0.0) return {mid, mid, 0.0, 0.0};
    if (sign_of(fm) == s_lo) {
      b.lo = mid;
      b.f_lo = fm;
    } else {
      b.hi = mid;
      b.f_hi = fm;
    }
  }
  return b;
}

double lowest_nonzero_temperature(const AnySystem& sys) {
  std::vector<double> ts;
  if (const auto* two = std::get_if<TwoSphereSystem>(&sys)) {
    ts = {two->sphere1.temperature, two->sphere2.temperature, two->T_env};
  } else {
    const auto& p = std::get<SpherePlateSystem>(sys);
    ts = {p.sphere.temperature, p.plate.temperature, p.T_env};
  }
  double t_min = 0.0;
  for (double t : ts)
    if (t > 0.0 && (t_min == 0.0 || t < t_min)) t_min = t;
  return t_min;
}

}  // namespace

std::string_view stability_name(Stability s) {
  return s == Stability::Stable ? "stable" : "unstable";
}

std::vector<double> make_grid(double d_min, double d_max, int points, GridSpacing spacing) {
  if (points < 1) throw ConfigError("d_grid.points", "must be >= 1");
  if (!(d_min > 0.0)) throw ConfigError("d_grid.min", "must be > 0");
  if (points == 1) return {d_min};
  if (!(d_max > d_min)) throw ConfigError("d_grid.max", "must exceed d_grid.min");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    g[i] = spacing == GridSpacing::Linear ? d_min + t * (d_max - d_min)
                                          : d_min * std::pow(d_max / d_min, t);
  }
  g.back() = d_max;
  return g;
}

std::vector<double> default_grid(const AnySystem& sys) {
  const double r_max = std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, TwoSphereSystem>) {
          return std::max(s.sphere1.radius, s.sphere2.radius);
        } else {
          return s.sphere.radius;
        }
      },
      sys);
  const double t_min = lowest_nonzero_temperature(sys);
  const double d_min = 4.0 * r_max;
  const double d_max = t_min > 0.0 ? 20.0 * thermal_wavelength(t_min) : 1000.0 * d_min;
  if (!(d_max > d_min)) {
    throw ConfigError("d_grid", "default grid is empty: 20 lambda_T does not exceed 4 R");
  }
  return make_grid(d_min, d_max, 200, GridSpacing::Log);
}

CurveSample evaluate_point(const AnySystem& sys, double d, const QuadratureSettings& settings) {
  CurveSample s;
  s.d = d;
  if (const auto* two = std::get_if<TwoSphereSystem>(&sys)) {
    PairBreakdown p = total_forces(two->at_separation(d), settings);
    s.breakdown1 = std::move(p.on_sphere1);
    s.breakdown2 = std::move(p.on_sphere2);
  } else {
    s.breakdown2 = total_force_on_sphere(std::get<SpherePlateSystem>(sys).at_separation(d), settings);
  }
  return s;
}

Curve force_curve(const AnySystem& sys, const std::vector<double>& grid,
                  const QuadratureSettings& settings, int threads) {
  if (grid.empty()) throw ConfigError("d_grid", "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("d_grid", "must be strictly increasing");
  }
  settings.validate();
  Curve curve(grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        curve[i] = evaluate_point(sys, grid[i], settings);
      } catch (const Error& e) {
        curve[i] = CurveSample{};
        curve[i].d = grid[i];
        curve[i].error = e.what();
        curve[i].breakdown2.converged = false;
      }
    }
  };
  // Validate once up front so configuration errors surface on this thread.
  if (std::holds_alternative<TwoSphereSystem>(sys)) {
    std::get<TwoSphereSystem>(sys).at_separation(grid.front()).validate();
  } else {
    std::get<SpherePlateSystem>(sys).at_separation(grid.front()).validate();
  }
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return curve;
}

std::vector<EquilibriumPoint> find_sign_changes(const std::vector<double>& d,
                                                const std::vector<double>& f,
                                                const ScalarFn& refine, double rel_tol) {
  if (d.size() != f.size()) throw Error("find_sign_changes: size mismatch");
  std::vector<EquilibriumPoint> out;
  std::size_t prev = d.size();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(f[i]) || sign_of(f[i]) == 0) continue;
    if (prev != d.size() && sign_of(f[prev]) != sign_of(f[i])) {
      Bracket b{d[prev], d[i], f[prev], f[i]};
      if (refine) b = bisect(b, rel_tol, refine);
      EquilibriumPoint p;
      p.d_star = b.lo == b.hi ? b.lo : interpolate_root(b.lo, b.f_lo, b.hi, b.f_hi);
      p.stability = f[prev] < 0.0 ? Stability::Stable : Stability::Unstable;
      p.bracket_lo = d[prev];
      p.bracket_hi = d[i];
      out.push_back(p);
    }
    prev = i;
  }
  return out;
}

std::vector<EquilibriumPoint> find_equilibria(const Curve& curve, const AnySystem& sys,
                                              const QuadratureSettings& settings, double rel_tol) {
  std::vector<double> d, f;
  for (const auto& s : curve) {
    if (!s.ok()) continue;
    d.push_back(s.d);
    f.push_back(s.breakdown2.total);
  }
  const ScalarFn refine = [&](double x) {
    if (const auto* two = std::get_if<TwoSphereSystem>(&sys)) {
      return total_force_on_sphere2(two->at_separation(x), settings).total;
    }
    return total_force_on_sphere(std::get<SpherePlateSystem>(sys).at_separation(x), settings).total;
  };
  return find_sign_changes(d, f, refine, rel_tol);
}

std::pair<double, double> default_masses(const TwoSphereSystem& sys) {
  return {std::pow(sys.sphere1.radius, 3), std::pow(sys.sphere2.radius, 3)};
}

std::vector<SppPoint> find_spp(const Curve& curve, const TwoSphereSystem& sys,
                               const QuadratureSettings& settings,
                               std::optional<std::pair<double, double>> masses, double rel_tol) {
  const auto [m1, m2] = masses.value_or(default_masses(sys));
  if (!(m1 > 0.0 && m2 > 0.0)) throw ConfigError("masses", "must be > 0");
  struct Acc {
    double d, a1, a2;
  };
  std::vector<Acc> pts;
  for (const auto& s : curve) {
    if (!s.ok() || !s.breakdown1) continue;
    const AxialForces ax = to_axial(s.breakdown1->total, s.breakdown2.total);
    pts.push_back({s.d, ax.on_sphere1 / m1, ax.on_sphere2 / m2});
  }
  const auto eval = [&](double x) {
    const PairBreakdown p = total_forces(sys.at_separation(x), settings);
    const AxialForces ax = to_axial(p.on_sphere1.total, p.on_sphere2.total);
    return Acc{x, ax.on_sphere1 / m1, ax.on_sphere2 / m2};
  };

  std::vector<SppPoint> out;
  std::size_t prev = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double gi = pts[i].a2 - pts[i].a1;
    if (!std::isfinite(gi) || sign_of(gi) == 0) continue;
    if (prev == pts.size()) {
      prev = i;
      continue;
    }
    const double gp = pts[prev].a2 - pts[prev].a1;
    if (sign_of(gp) != sign_of(gi)) {
      Acc lo = pts[prev], hi = pts[i];
      const int s_lo = sign_of(gp);
      while ((hi.d - lo.d) > rel_tol * lo.d) {
        Acc mid;
        try {
          mid = eval(0.5 * (lo.d + hi.d));
        } catch (const Error&) {
          break;
        }
        const int s = sign_of(mid.a2 - mid.a1);
        if (s == 0) {
          lo = hi = mid;
          break;
        }
        (s == s_lo ? lo : hi) = mid;
      }
      const double g_lo = lo.a2 - lo.a1, g_hi = hi.a2 - hi.a1;
      const double t = (lo.d == hi.d || g_lo == g_hi) ? 0.5 : g_lo / (g_lo - g_hi);
      const double a1_star = lo.a1 + t * (hi.a1 - lo.a1);
      double scale = 0.0;
      const std::size_t j0 = prev > 0 ? prev - 1 : 0, j1 = std::min(i + 1, pts.size() - 1);
      for (std::size_t j = j0; j <= j1; ++j)
        scale = std::max({scale, std::abs(pts[j].a1), std::abs(pts[j].a2)});
      if (std::abs(a1_star) >= 1e-3 * scale) {
        SppPoint p;
        p.d_star = lo.d + t * (hi.d - lo.d);
        p.stability = gp > 0.0 ? Stability::Stable : Stability::Unstable;
        p.mass_ratio = m2 / m1;
        p.bracket_lo = pts[prev].d;
        p.bracket_hi = pts[i].d;
        out.push_back(p);
      }
    }
    prev = i;
  }
  return out;
}

WavelengthEstimate oscillation_wavelength(const std::vector<double>& d,
                                          const std::vector<double>& f) {
  const auto zeros = find_sign_changes(d, f, ScalarFn{});
  if (zeros.size() < 4) {
    throw TooFewCrossings("oscillation_wavelength: need at least 4 zero crossings, found " +
                          std::to_string(zeros.size()));
  }
  std::vector<double> gaps;
  for (std::size_t i = 1; i < zeros.size(); ++i) gaps.push_back(zeros[i].d_star - zeros[i - 1].d_star);
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= gaps.size() > 1 ? gaps.size() - 1 : 1;
  return {2.0 * mean, 2.0 * std::sqrt(var), zeros.size()};
}

WavelengthEstimate oscillation_wavelength(const Curve& curve) {
  std::vector<double> d, f;
  for (const auto& s : curve) {
    if (!s.ok()) continue;
    d.push_back(s.d);
    f.push_back(s.breakdown2.self_emission);
  }
  return oscillation_wavelength(d, f);
}

}  // namespace neqforce

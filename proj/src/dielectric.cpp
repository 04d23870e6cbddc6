#include "neqforce/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"
#include "neqforce/quadrature.hpp"

namespace neqforce {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

DielectricModel DielectricModel::lorentz(std::string name, double eps_inf,
                                         std::vector<LorentzOscillator> oscillators) {
  DielectricModel m{std::move(name), LorentzSet{eps_inf, std::move(oscillators)}};
  m.validate();
  return m;
}

DielectricModel DielectricModel::tabulated(std::string name, std::vector<DielectricSample> samples) {
  DielectricModel m{std::move(name), Tabulated{std::move(samples)}};
  m.validate();
  return m;
}

DielectricModel DielectricModel::constant(std::string name, Complex eps) {
  DielectricModel m{std::move(name), Constant{eps}};
  m.validate();
  return m;
}

void DielectricModel::validate() const {
  std::visit(Overloaded{
                 [&](const LorentzSet& l) {
                   if (!(l.eps_inf >= 1.0)) throw ConfigError(name + ".eps_inf", "must be >= 1");
                   for (std::size_t i = 0; i < l.oscillators.size(); ++i) {
                     const auto& o = l.oscillators[i];
                     const std::string p = name + ".oscillators[" + std::to_string(i) + "]";
                     if (!(o.omega_res > 0.0)) throw ConfigError(p + ".omega_res", "must be > 0");
                     if (!(o.strength >= 0.0)) throw ConfigError(p + ".strength", "must be >= 0");
                     if (!(o.damping >= 0.0)) throw ConfigError(p + ".damping", "must be >= 0");
                   }
                 },
                 [&](const Tabulated& t) {
                   if (t.samples.size() < 2) {
                     throw ConfigError(name + ".samples", "need at least two samples");
                   }
                   for (std::size_t i = 0; i < t.samples.size(); ++i) {
                     const auto& s = t.samples[i];
                     const std::string p = name + ".samples[" + std::to_string(i) + "]";
                     if (!(s.omega > 0.0)) throw ConfigError(p + ".omega", "must be > 0");
                     if (i > 0 && !(s.omega > t.samples[i - 1].omega)) {
                       throw ConfigError(p + ".omega", "grid must be strictly increasing");
                     }
                     if (!(s.eps_im >= 0.0)) throw ConfigError(p + ".eps_im", "must be >= 0");
                   }
                 },
                 [&](const Constant& c) {
                   if (!(c.eps.imag() >= 0.0)) throw ConfigError(name + ".eps", "Im eps must be >= 0");
                 },
             },
             form);
}

namespace {

Complex tabulated_epsilon(const Tabulated& t, double omega) {
  const auto& s = t.samples;
  if (omega < s.front().omega) {
    std::ostringstream msg;
    msg << "omega = " << omega << " rad/s below tabulated minimum " << s.front().omega;
    throw RangeError(msg.str());
  }
  if (omega > s.back().omega) {
    std::ostringstream msg;
    msg << "omega = " << omega << " rad/s above tabulated maximum " << s.back().omega;
    throw RangeError(msg.str());
  }
  auto it = std::upper_bound(s.begin(), s.end(), omega,
                             [](double w, const DielectricSample& x) { return w < x.omega; });
  if (it == s.end()) return {s.back().eps_re, s.back().eps_im};
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t_frac = std::log(omega / lo.omega) / std::log(hi.omega / lo.omega);
  return {lo.eps_re + t_frac * (hi.eps_re - lo.eps_re), lo.eps_im + t_frac * (hi.eps_im - lo.eps_im)};
}

}  // namespace

Complex epsilon(const DielectricModel& model, double omega) {
  return std::visit(Overloaded{
                        [&](const LorentzSet& l) {
                          Complex eps = l.eps_inf;
                          for (const auto& o : l.oscillators) {
                            eps += o.strength / Complex(o.omega_res * o.omega_res - omega * omega,
                                                        -o.damping * omega);
                          }
                          return eps;
                        },
                        [&](const Tabulated& t) { return tabulated_epsilon(t, omega); },
                        [&](const Constant& c) { return c.eps; },
                    },
                    model.form);
}

double epsilon_imag_axis(const DielectricModel& model, double xi) {
  return std::visit(Overloaded{
                        [&](const LorentzSet& l) {
                          double eps = l.eps_inf;
                          for (const auto& o : l.oscillators) {
                            eps += o.strength / (o.omega_res * o.omega_res + xi * xi + o.damping * xi);
                          }
                          return eps;
                        },
                        [&](const Tabulated&) { return epsilon_imag_axis_kramers_kronig(model, xi); },
                        [&](const Constant& c) { return c.eps.real(); },
                    },
                    model.form);
}

double epsilon_imag_axis_kramers_kronig(const DielectricModel& model, double xi, double rel_tol) {
  std::vector<double> bp;
  double lo = 0.0;
  double hi = 0.0;
  double baseline = 1.0;
  if (const auto* t = std::get_if<Tabulated>(&model.form)) {
    // Response above the grid is folded into a constant baseline taken from
    // the last sample (the data's own eps_inf).
    baseline = std::max(1.0, t->samples.back().eps_re);
    lo = t->samples.front().omega;
    hi = t->samples.back().omega;
    for (const auto& s : t->samples) bp.push_back(s.omega);
  } else if (const auto* l = std::get_if<LorentzSet>(&model.form)) {
    if (l->oscillators.empty()) return l->eps_inf;
    double wmin = l->oscillators.front().omega_res;
    double wmax = wmin;
    for (const auto& o : l->oscillators) {
      wmin = std::min(wmin, o.omega_res);
      wmax = std::max(wmax, o.omega_res);
    }
    lo = 0.0;
    hi = 1e4 * wmax;
    for (double w = 1e-4 * wmin; w < hi; w *= 2.0) bp.push_back(w);
    for (double w : resonance_hints(model)) bp.push_back(w);
    bp.push_back(lo);
    // eps_inf carries the response above every oscillator
    const auto integrand = [&](double w) { return w * epsilon(model, w).imag() / (w * w + xi * xi); };
    bp.push_back(hi);
    const auto r = integrate_adaptive(RealFn(integrand), bp, {rel_tol, 0.0, 0.0, 200000});
    return l->eps_inf + 2.0 / kPi * r.value;
  } else {
    return std::get<Constant>(model.form).eps.real();
  }
  const auto integrand = [&](double w) { return w * epsilon(model, w).imag() / (w * w + xi * xi); };
  bp.push_back(lo);
  bp.push_back(hi);
  const auto r = integrate_adaptive(RealFn(integrand), bp, {rel_tol, 0.0, 0.0, 200000});
  return baseline + 2.0 / kPi * r.value;
}

DielectricModel scale_frequency(const DielectricModel& model, double scale) {
  if (!(scale > 0.0)) throw ConfigError("frequency_scale", "must be > 0");
  DielectricModel out = model;
  if (scale == 1.0) return out;
  std::ostringstream tag;
  tag << model.name << "@x" << scale;
  out.name = tag.str();
  std::visit(Overloaded{
                 [&](LorentzSet& l) {
                   for (auto& o : l.oscillators) {
                     o.omega_res /= scale;
                     o.damping /= scale;
                     o.strength /= scale * scale;
                   }
                 },
                 [&](Tabulated& t) {
                   for (auto& s : t.samples) s.omega /= scale;
                 },
                 [&](Constant&) {},
             },
             out.form);
  return out;
}

namespace {

// Sign changes of Re eps(w) - level on a log grid, refined by bisection.
std::vector<double> level_crossings(const DielectricModel& model, double lo, double hi,
                                    double level) {
  std::vector<double> roots;
  constexpr int kGrid = 4000;
  const double ratio = std::pow(hi / lo, 1.0 / kGrid);
  double w0 = lo;
  double f0 = epsilon(model, w0).real() - level;
  for (int i = 1; i <= kGrid; ++i) {
    const double w1 = (i == kGrid) ? hi : w0 * ratio;
    const double f1 = epsilon(model, w1).real() - level;
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double a = w0, b = w1, fa = f0;
      for (int it = 0; it < 60 && (b - a) > 1e-12 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = epsilon(model, m).real() - level;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    w0 = w1;
    f0 = f1;
  }
  return roots;
}

}  // namespace

std::vector<double> resonance_hints(const DielectricModel& model) {
  std::vector<double> hints;
  if (const auto* l = std::get_if<LorentzSet>(&model.form)) {
    if (l->oscillators.empty()) return hints;
    double wmin = l->oscillators.front().omega_res;
    double wmax = wmin;
    for (const auto& o : l->oscillators) {
      wmin = std::min(wmin, o.omega_res);
      wmax = std::max(wmax, o.omega_res);
      hints.push_back(o.omega_res);
      if (o.omega_res - 2.0 * o.damping > 0.0) hints.push_back(o.omega_res - 2.0 * o.damping);
      hints.push_back(o.omega_res + 2.0 * o.damping);
    }
    const auto nearest_damping = [&](double w) {
      const LorentzOscillator* best = &l->oscillators.front();
      for (const auto& o : l->oscillators)
        if (std::abs(o.omega_res - w) < std::abs(best->omega_res - w)) best = &o;
      return best->damping;
    };
    for (double level : {-1.0, -2.0}) {
      for (double w : level_crossings(model, 0.05 * wmin, 20.0 * wmax, level)) {
        const double g = nearest_damping(w);
        hints.push_back(w);
        if (w - 2.0 * g > 0.0) hints.push_back(w - 2.0 * g);
        hints.push_back(w + 2.0 * g);
      }
    }
  } else if (const auto* t = std::get_if<Tabulated>(&model.form)) {
    const auto peak = std::max_element(
        t->samples.begin(), t->samples.end(),
        [](const DielectricSample& a, const DielectricSample& b) { return a.eps_im < b.eps_im; });
    hints.push_back(peak->omega);
    for (double level : {-1.0, -2.0}) {
      for (double w : level_crossings(model, t->samples.front().omega, t->samples.back().omega, level)) {
        hints.push_back(w);
      }
    }
  }
  std::sort(hints.begin(), hints.end());
  hints.erase(std::unique(hints.begin(), hints.end()), hints.end());
  return hints;
}

double lowest_resonance(const DielectricModel& model) {
  if (const auto* l = std::get_if<LorentzSet>(&model.form)) {
    if (l->oscillators.empty()) return 0.0;
    double w = l->oscillators.front().omega_res;
    for (const auto& o : l->oscillators) w = std::min(w, o.omega_res);
    return w;
  }
  if (const auto* t = std::get_if<Tabulated>(&model.form)) {
    const auto peak = std::max_element(
        t->samples.begin(), t->samples.end(),
        [](const DielectricSample& a, const DielectricSample& b) { return a.eps_im < b.eps_im; });
    return peak->omega;
  }
  return 0.0;
}

double lowest_resonance_wavelength(const DielectricModel& model) {
  const double w = lowest_resonance(model);
  return w > 0.0 ? 2.0 * kPi * PhysicalConstants::c / w : 0.0;
}

double peak_abs_epsilon(const DielectricModel& model) {
  return std::visit(Overloaded{
                        [&](const LorentzSet& l) {
                          double peak = l.eps_inf;
                          for (const auto& o : l.oscillators) {
                            peak = std::max(peak, std::abs(epsilon(model, o.omega_res)));
                          }
                          return peak;
                        },
                        [&](const Tabulated& t) {
                          double peak = 0.0;
                          for (const auto& s : t.samples) {
                            peak = std::max(peak, std::hypot(s.eps_re, s.eps_im));
                          }
                          return peak;
                        },
                        [&](const Constant& c) { return std::abs(c.eps); },
                    },
                    model.form);
}

}  // namespace neqforce

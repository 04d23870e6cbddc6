#include "neqforce/commands.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "neqforce/errors.hpp"

namespace neqforce {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string geometry_name(const AnySystem& sys) {
  return std::holds_alternative<TwoSphereSystem>(sys) ? "two_spheres" : "sphere_plate";
}

std::ofstream open_output(const fs::path& out) {
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ConfigError("--out", "cannot write " + out.string());
  return f;
}

std::size_t failed_points(const Curve& curve) {
  std::size_t n = 0;
  for (const auto& s : curve) n += s.ok() ? 0 : 1;
  return n;
}

void report_failures(const Curve& curve, std::ostream& log) {
  for (const auto& s : curve) {
    if (!s.ok()) log << "numerical failure at d = " << fmt(s.d) << " m: " << s.error << '\n';
  }
}

ojson equilibria_json(const std::vector<EquilibriumPoint>& pts) {
  ojson arr = ojson::array();
  for (const auto& p : pts) {
    arr.push_back({{"d_star_m", p.d_star},
                   {"stability", stability_name(p.stability)},
                   {"bracket_m", {p.bracket_lo, p.bracket_hi}}});
  }
  return arr;
}

}  // namespace

void write_curve_csv(std::ostream& out, const Curve& curve, const AnySystem& sys) {
  const bool two = std::holds_alternative<TwoSphereSystem>(sys);
  out << "# geometry=" << geometry_name(sys)
      << "; d in m; forces in N; positive = attraction; F_total_1 = force on sphere 1"
      << (two ? "" : " (not computed)")
      << "; F_total_2 and the breakdown columns = force on "
      << (two ? "sphere 2" : "the sphere")
      << "; convergence_flag 1 = converged, 0 = tolerance not reached, -1 = failed\n";
  out << "d_m,F_total_1,F_total_2,F_eq,F_interaction,F_self,convergence_flag\n";
  for (const auto& s : curve) {
    out << fmt(s.d) << ',';
    if (!s.ok()) {
      out << ",,,,,-1\n";
      continue;
    }
    if (s.breakdown1) out << fmt(s.breakdown1->total);
    const auto& b = s.breakdown2;
    const bool conv = b.converged && (!s.breakdown1 || s.breakdown1->converged);
    out << ',' << fmt(b.total) << ',' << fmt(b.equilibrium) << ',' << fmt(b.interaction_from_other)
        << ',' << fmt(b.self_emission) << ',' << (conv ? 1 : 0) << '\n';
  }
}

int cmd_curve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const AnySystem& sys = cfg.require_system();
  const Curve curve = force_curve(sys, cfg.d_grid(), cfg.quadrature, cfg.threads);
  std::ofstream f = open_output(out);
  write_curve_csv(f, curve, sys);
  report_failures(curve, log);
  return failed_points(curve) == 0 ? kExitOk : kExitNumericalFailure;
}

int cmd_equilibria(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const AnySystem& sys = cfg.require_system();
  const Curve curve = force_curve(sys, cfg.d_grid(), cfg.quadrature, cfg.threads);
  const auto eq = find_equilibria(curve, sys, cfg.quadrature);
  ojson j;
  j["geometry"] = geometry_name(sys);
  j["body"] = std::holds_alternative<TwoSphereSystem>(sys) ? "sphere2" : "sphere";
  j["sign_convention"] = "positive = attraction";
  j["curve_points"] = curve.size();
  j["failed_points"] = failed_points(curve);
  j["equilibria"] = equilibria_json(eq);
  std::ofstream f = open_output(out);
  f << j.dump(2) << '\n';
  report_failures(curve, log);
  return failed_points(curve) == 0 ? kExitOk : kExitNumericalFailure;
}

int cmd_spp(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const AnySystem& sys = cfg.require_system();
  const auto* two = std::get_if<TwoSphereSystem>(&sys);
  if (two == nullptr) throw ConfigError("geometry", "SPP requires two spheres");
  const Curve curve = force_curve(sys, cfg.d_grid(), cfg.quadrature, cfg.threads);
  const auto masses = cfg.masses.value_or(default_masses(*two));
  const auto spp = find_spp(curve, *two, cfg.quadrature, masses);
  const auto eq = find_equilibria(curve, sys, cfg.quadrature);
  ojson j;
  j["geometry"] = "two_spheres";
  j["axis"] = "unit vector from sphere 1 to sphere 2";
  j["mass_model"] = cfg.masses ? "user masses" : "solid spheres of equal density, m proportional to R^3";
  j["masses"] = {masses.first, masses.second};
  j["mass_ratio_m2_over_m1"] = masses.second / masses.first;
  j["curve_points"] = curve.size();
  j["failed_points"] = failed_points(curve);
  ojson arr = ojson::array();
  for (const auto& p : spp) {
    arr.push_back({{"d_star_m", p.d_star},
                   {"stability", stability_name(p.stability)},
                   {"mass_ratio", p.mass_ratio},
                   {"bracket_m", {p.bracket_lo, p.bracket_hi}}});
  }
  j["spp"] = arr;
  j["zero_force_points_sphere2"] = equilibria_json(eq);
  std::ofstream f = open_output(out);
  f << j.dump(2) << '\n';
  report_failures(curve, log);
  return failed_points(curve) == 0 ? kExitOk : kExitNumericalFailure;
}

std::vector<ValidationCase> selected_validation_cases(const ValidationOptions& opts) {
  std::vector<ValidationCase> out;
  for (auto c : default_validation_suite()) {
    if (!opts.cases.empty()) {
      bool keep = false;
      for (const auto& want : opts.cases)
        keep = keep || want == c.id || want == regime_name(c.regime);
      if (!keep) continue;
    }
    if (opts.temperature) c.temperature = *opts.temperature;
    out.push_back(std::move(c));
  }
  if (out.empty()) throw ConfigError("validation.cases", "selects no validation case");
  return out;
}

std::vector<ValidationReport> run_validation(const std::vector<ValidationCase>& cases,
                                             const QuadratureSettings& settings, double threshold,
                                             int threads) {
  std::vector<ValidationReport> reports(cases.size());
  std::vector<std::string> errors(cases.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        reports[i] = validate_against_numeric(cases[i], settings, threshold);
      } catch (const Error& e) {
        reports[i].id = cases[i].id;
        reports[i].regime = cases[i].regime;
        reports[i].tolerance = cases[i].tolerance;
        reports[i].status = ValidationStatus::Fail;
        reports[i].warnings.push_back(std::string("numerical error: ") + e.what());
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return reports;
}

int cmd_validate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  QuadratureSettings q = cfg.quadrature;
  q.abs_floor = 0.0;
  const auto cases = selected_validation_cases(cfg.validation);
  const auto reports = run_validation(cases, q, cfg.validation.threshold, cfg.threads);
  bool all_passed = true;
  ojson arr = ojson::array();
  char line[256];
  std::snprintf(line, sizeof line, "%-32s %-26s %-8s %12s %10s\n", "case", "regime", "status",
                "rel_dev", "tolerance");
  log << line;
  for (const auto& r : reports) {
    all_passed = all_passed && r.status != ValidationStatus::Fail;
    ojson e = {{"id", r.id},
               {"regime", regime_name(r.regime)},
               {"status", status_name(r.status)},
               {"numeric", r.numeric},
               {"closed_form", r.closed_form},
               {"rel_dev", r.rel_dev},
               {"tolerance", r.tolerance},
               {"warnings", r.warnings}};
    arr.push_back(e);
    std::snprintf(line, sizeof line, "%-32s %-26s %-8s %12.4e %10.3g\n", r.id.c_str(),
                  std::string(regime_name(r.regime)).c_str(), std::string(status_name(r.status)).c_str(),
                  r.rel_dev, r.tolerance);
    log << line;
    for (const auto& w : r.warnings) log << "    " << w << '\n';
  }
  ojson j;
  j["threshold"] = cfg.validation.threshold;
  j["rel_tol"] = q.rel_tol;
  j["all_passed"] = all_passed;
  j["cases"] = arr;
  std::ofstream f = open_output(out);
  f << j.dump(2) << '\n';
  return all_passed ? kExitOk : kExitValidationFailure;
}

int run_command(const CommandLine& cl, std::ostream& log) {
  try {
    RunConfig cfg = load_run_config(cl.config);
    if (cl.threads) {
      if (*cl.threads < 1) throw ConfigError("--threads", "must be >= 1");
      cfg.threads = *cl.threads;
    }
    if (cl.rel_tol) {
      cfg.quadrature.rel_tol = *cl.rel_tol;
      cfg.quadrature.validate();
    }
    fs::path out;
    if (cl.out) {
      out = *cl.out;
    } else if (cfg.output) {
      out = *cfg.output;
      if (out.is_relative()) out = cl.config.parent_path() / out;
    } else {
      throw ConfigError("--out", "no output path given");
    }
    if (cl.command == "curve") return cmd_curve(cfg, out, log);
    if (cl.command == "equilibria") return cmd_equilibria(cfg, out, log);
    if (cl.command == "spp") return cmd_spp(cfg, out, log);
    if (cl.command == "validate") return cmd_validate(cfg, out, log);
    throw ConfigError("command", "unknown command '" + cl.command + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace neqforce

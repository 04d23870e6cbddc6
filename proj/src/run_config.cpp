#include "neqforce/run_config.hpp"

#include <fstream>
#include <set>

#include "neqforce/errors.hpp"
#include "neqforce/material_io.hpp"

namespace neqforce {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMicron = 1e-6;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(join(path, it.key()), "unknown field");
    }
  }
}

const json& object_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path, "missing");
  if (!j.at(key).is_object()) throw ConfigError(path, "must be an object");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing");
  if (!j.at(key).is_number()) throw ConfigError(join(path, key), "must be a number");
  return j.at(key).get<double>();
}

Complex mu_value(const json& j, const std::string& path) {
  if (!j.contains("mu")) return {1.0, 0.0};
  const json& m = j.at("mu");
  if (m.is_number()) return {m.get<double>(), 0.0};
  if (m.is_array() && m.size() == 2 && m[0].is_number() && m[1].is_number()) {
    return {m[0].get<double>(), m[1].get<double>()};
  }
  throw ConfigError(path + ".mu", "must be a number or [re, im]");
}

SphereSpec sphere_spec(const json& j, const fs::path& base, const std::string& path) {
  check_keys(j, {"material", "radius_um", "temperature_K", "mu"}, path);
  if (!j.contains("material")) throw ConfigError(path + ".material", "missing");
  SphereSpec s;
  s.dielectric = resolve_material(j.at("material"), base, path + ".material");
  s.radius = number(j, "radius_um", path) * kMicron;
  s.temperature = number(j, "temperature_K", path);
  s.mu = mu_value(j, path);
  s.validate(path);
  return s;
}

PlateSpec plate_spec(const json& j, const fs::path& base, const std::string& path) {
  check_keys(j, {"material", "temperature_K", "mu"}, path);
  if (!j.contains("material")) throw ConfigError(path + ".material", "missing");
  PlateSpec p;
  p.dielectric = resolve_material(j.at("material"), base, path + ".material");
  p.temperature = number(j, "temperature_K", path);
  p.mu = mu_value(j, path);
  p.validate(path);
  return p;
}

QuadratureSettings quadrature(const json& j) {
  check_keys(j, {"rel_tol", "abs_floor_N", "bose_cutoff_x", "max_subdivisions", "matsubara_tail_tol"},
             "quadrature");
  QuadratureSettings q;
  if (j.contains("rel_tol")) q.rel_tol = number(j, "rel_tol", "quadrature");
  if (j.contains("abs_floor_N")) q.abs_floor = number(j, "abs_floor_N", "quadrature");
  if (j.contains("bose_cutoff_x")) q.bose_cutoff_x = number(j, "bose_cutoff_x", "quadrature");
  if (j.contains("max_subdivisions")) {
    q.max_subdivisions = static_cast<int>(number(j, "max_subdivisions", "quadrature"));
  }
  if (j.contains("matsubara_tail_tol")) {
    q.matsubara_tail_tol = number(j, "matsubara_tail_tol", "quadrature");
  }
  q.validate();
  return q;
}

GridSpec grid_spec(const json& j) {
  check_keys(j, {"min_um", "max_um", "points", "spacing"}, "d_grid");
  GridSpec g;
  g.d_min = number(j, "min_um", "d_grid") * kMicron;
  g.d_max = number(j, "max_um", "d_grid") * kMicron;
  if (!j.contains("points") || !j.at("points").is_number_integer()) {
    throw ConfigError("d_grid.points", "must be an integer");
  }
  g.points = j.at("points").get<int>();
  if (g.points < 1) throw ConfigError("d_grid.points", "grid is empty");
  const std::string spacing = j.value("spacing", std::string("log"));
  if (spacing == "log") {
    g.spacing = GridSpacing::Log;
  } else if (spacing == "lin") {
    g.spacing = GridSpacing::Linear;
  } else {
    throw ConfigError("d_grid.spacing", "must be 'lin' or 'log'");
  }
  if (!(g.d_min > 0.0)) throw ConfigError("d_grid.min_um", "must be > 0");
  if (g.points > 1 && !(g.d_max > g.d_min)) throw ConfigError("d_grid.max_um", "must exceed min_um");
  return g;
}

}  // namespace

std::vector<double> RunConfig::d_grid() const {
  if (grid) return make_grid(grid->d_min, grid->d_max, grid->points, grid->spacing);
  return default_grid(require_system());
}

const AnySystem& RunConfig::require_system() const {
  if (!system) throw ConfigError("geometry", "missing");
  return *system;
}

RunConfig parse_run_config(const json& j, const fs::path& base) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  check_keys(j,
             {"description", "geometry", "sphere1", "sphere2", "sphere", "plate", "T_env_K", "d_grid",
              "quadrature", "masses_kg", "validation", "output", "threads"},
             "");
  RunConfig cfg;
  if (j.contains("geometry")) {
    if (!j.at("geometry").is_string()) throw ConfigError("geometry", "must be a string");
    const std::string geom = j.at("geometry").get<std::string>();
    const double t_env = number(j, "T_env_K", "");
    if (geom == "two_spheres") {
      TwoSphereSystem s;
      s.sphere1 = sphere_spec(object_field(j, "sphere1", "sphere1"), base, "sphere1");
      s.sphere2 = sphere_spec(object_field(j, "sphere2", "sphere2"), base, "sphere2");
      s.T_env = t_env;
      cfg.system = s;
    } else if (geom == "sphere_plate") {
      SpherePlateSystem s;
      s.sphere = sphere_spec(object_field(j, "sphere", "sphere"), base, "sphere");
      s.plate = plate_spec(object_field(j, "plate", "plate"), base, "plate");
      s.T_env = t_env;
      cfg.system = s;
    } else {
      throw ConfigError("geometry", "must be 'two_spheres' or 'sphere_plate'");
    }
    if (!(t_env >= 0.0)) throw ConfigError("T_env_K", "must be >= 0");
  }
  if (j.contains("d_grid")) cfg.grid = grid_spec(object_field(j, "d_grid", "d_grid"));
  if (j.contains("quadrature")) cfg.quadrature = quadrature(object_field(j, "quadrature", "quadrature"));
  if (j.contains("masses_kg")) {
    const json& m = j.at("masses_kg");
    if (!m.is_array() || m.size() != 2 || !m[0].is_number() || !m[1].is_number()) {
      throw ConfigError("masses_kg", "must be [m1, m2]");
    }
    cfg.masses = std::make_pair(m[0].get<double>(), m[1].get<double>());
    if (!(cfg.masses->first > 0.0 && cfg.masses->second > 0.0)) {
      throw ConfigError("masses_kg", "must be > 0");
    }
  }
  if (j.contains("validation")) {
    const json& v = object_field(j, "validation", "validation");
    check_keys(v, {"threshold", "temperature_K", "cases"}, "validation");
    if (v.contains("threshold")) cfg.validation.threshold = number(v, "threshold", "validation");
    if (v.contains("temperature_K")) {
      cfg.validation.temperature = number(v, "temperature_K", "validation");
      if (!(*cfg.validation.temperature > 0.0)) {
        throw ConfigError("validation.temperature_K", "must be > 0");
      }
    }
    if (v.contains("cases")) {
      if (!v.at("cases").is_array()) throw ConfigError("validation.cases", "must be an array");
      for (const auto& c : v.at("cases")) {
        if (!c.is_string()) throw ConfigError("validation.cases", "entries must be strings");
        cfg.validation.cases.push_back(c.get<std::string>());
      }
    }
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output", "must be a string");
    cfg.output = j.at("output").get<std::string>();
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer() || j.at("threads").get<int>() < 1) {
      throw ConfigError("threads", "must be a positive integer");
    }
    cfg.threads = j.at("threads").get<int>();
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("--config", "cannot open " + file.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("--config", file.string() + ": " + e.what());
  }
  return parse_run_config(j, file.parent_path());
}

}  // namespace neqforce

#include "neqforce/material_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "neqforce/constants.hpp"
#include "neqforce/errors.hpp"

namespace neqforce {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key, "must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(path, "must be a number or [re, im]");
}

LorentzOscillator oscillator(const json& o, const std::string& path) {
  if (!o.is_object()) throw ConfigError(path, "must be an object");
  LorentzOscillator osc{};
  if (o.contains("omega_res_rad_s")) {
    osc.omega_res = number(o, "omega_res_rad_s", path);
  } else if (o.contains("wavelength_um")) {
    osc.omega_res = 2.0 * kPi * PhysicalConstants::c / (number(o, "wavelength_um", path) * 1e-6);
  } else {
    throw ConfigError(path, "needs omega_res_rad_s or wavelength_um");
  }
  if (o.contains("strength_rad2_s2")) {
    osc.strength = number(o, "strength_rad2_s2", path);
  } else if (o.contains("delta_eps")) {
    osc.strength = number(o, "delta_eps", path) * osc.omega_res * osc.omega_res;
  } else {
    throw ConfigError(path, "needs strength_rad2_s2 or delta_eps");
  }
  if (o.contains("damping_rad_s")) {
    osc.damping = number(o, "damping_rad_s", path);
  } else if (o.contains("damping_ratio")) {
    osc.damping = number(o, "damping_ratio", path) * osc.omega_res;
  } else {
    throw ConfigError(path, "needs damping_rad_s or damping_ratio");
  }
  return osc;
}

}  // namespace

fs::path materials_dir() {
  if (const char* env = std::getenv("NEQFORCE_MATERIALS_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path(NEQFORCE_DEFAULT_MATERIALS_DIR);
}

std::vector<DielectricSample> read_dielectric_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open dielectric data file");
  std::vector<DielectricSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    DielectricSample s{};
    if (!(ss >> s.omega >> s.eps_re >> s.eps_im)) {
      if (out.empty() && std::isalpha(static_cast<unsigned char>(line[first]))) continue;  // header
      throw ConfigError(file.string() + ":" + std::to_string(line_no), "expected three numbers");
    }
    out.push_back(s);
  }
  return out;
}

DielectricModel material_from_json(const json& j, const fs::path& base_dir, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "material definition must be an object");
  const std::string name = j.value("name", std::string("unnamed"));
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(path + ".type", "missing (lorentz|tabulated|constant)");
  }
  const std::string type = j.at("type").get<std::string>();
  DielectricModel model;
  if (type == "lorentz") {
    std::vector<LorentzOscillator> osc;
    if (!j.contains("oscillators") || !j.at("oscillators").is_array()) {
      throw ConfigError(path + ".oscillators", "missing array");
    }
    const auto& arr = j.at("oscillators");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      osc.push_back(oscillator(arr[i], path + ".oscillators[" + std::to_string(i) + "]"));
    }
    model = DielectricModel::lorentz(name, number_or(j, "eps_inf", 1.0, path), std::move(osc));
  } else if (type == "tabulated") {
    std::vector<DielectricSample> samples;
    if (j.contains("file")) {
      fs::path f = j.at("file").get<std::string>();
      if (f.is_relative()) f = base_dir / f;
      samples = read_dielectric_csv(f);
    } else if (j.contains("samples") && j.at("samples").is_array()) {
      for (const auto& s : j.at("samples")) {
        if (!s.is_array() || s.size() != 3) throw ConfigError(path + ".samples", "rows must be [omega, re, im]");
        samples.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
      }
    } else {
      throw ConfigError(path, "tabulated material needs 'file' or 'samples'");
    }
    model = DielectricModel::tabulated(name, std::move(samples));
  } else if (type == "constant") {
    if (!j.contains("eps")) throw ConfigError(path + ".eps", "missing");
    model = DielectricModel::constant(name, complex_value(j.at("eps"), path + ".eps"));
  } else {
    throw ConfigError(path + ".type", "unknown material type '" + type + "'");
  }
  if (j.contains("frequency_scale")) {
    const double s = number(j, "frequency_scale", path);
    if (!(s > 0.0)) throw ConfigError(path + ".frequency_scale", "must be > 0");
    model = scale_frequency(model, s);
  }
  return model;
}

DielectricModel load_material_file(const fs::path& file, const std::string& path) {
  std::ifstream in(file);
  if (!in) throw ConfigError(path, "cannot open material file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path, file.string() + ": " + e.what());
  }
  return material_from_json(j, file.parent_path(), path);
}

DielectricModel resolve_material(const json& ref, const fs::path& base_dir, const std::string& path) {
  if (ref.is_object()) {
    if (ref.contains("type")) return material_from_json(ref, base_dir, path);
    // {"name": "...", "frequency_scale": s} refers to a library entry.
    if (!ref.contains("name")) throw ConfigError(path, "material reference needs 'name' or 'type'");
    DielectricModel m = resolve_material(ref.at("name"), base_dir, path);
    if (ref.contains("frequency_scale")) {
      const double s = number(ref, "frequency_scale", path);
      if (!(s > 0.0)) throw ConfigError(path + ".frequency_scale", "must be > 0");
      m = scale_frequency(m, s);
    }
    return m;
  }
  if (!ref.is_string()) throw ConfigError(path, "must be a material name, file or object");
  const std::string s = ref.get<std::string>();
  if (s.size() > 5 && s.substr(s.size() - 5) == ".json") {
    fs::path f = s;
    if (f.is_relative()) f = base_dir / f;
    return load_material_file(f, path);
  }
  const fs::path f = materials_dir() / (s + ".json");
  if (!fs::exists(f)) {
    throw ConfigError(path, "unknown material '" + s + "' (looked for " + f.string() + ")");
  }
  return load_material_file(f, path);
}

}  // namespace neqforce

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "neqforce/dielectric.hpp"

namespace neqforce {

/// $NEQFORCE_MATERIALS_DIR if set, else the library directory compiled in.
std::filesystem::path materials_dir();

/// Three columns omega_rad_s, eps_re, eps_im; an optional header line and
/// '#' comments are skipped.
std::vector<DielectricSample> read_dielectric_csv(const std::filesystem::path& file);

/// Material definition {name, type: lorentz|tabulated|constant, ...}.
/// Relative data files resolve against `base_dir`. `path` prefixes error
/// messages. An optional "frequency_scale" s yields eps(s w).
DielectricModel material_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                                   const std::string& path = "material");

/// A library name ("sio2_surrogate"), a path to a .json file, or an inline object.
DielectricModel resolve_material(const nlohmann::json& ref, const std::filesystem::path& base_dir,
                                 const std::string& path = "material");

DielectricModel load_material_file(const std::filesystem::path& file,
                                   const std::string& path = "material");

}  // namespace neqforce

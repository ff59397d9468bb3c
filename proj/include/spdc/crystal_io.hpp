#pragma once

#include <string>

#include "spdc/crystal.hpp"

namespace spdc {

// Loads a crystal description from a JSON file. Schema (angles in degrees,
// lengths in mm, wavelengths in um):
//
// {
//   "name": "BBO",
//   "length_mm": 2.0,
//   "cut_angle_deg": 49.7,
//   "ordinary":      {"a": ..., "b": ..., "c": ..., "d": ...,
//                     "lambda_min_um": ..., "lambda_max_um": ...},
//   "extraordinary": { ... same fields ... }
// }
CrystalSpec load_crystal(const std::string& path);

CrystalSpec parse_crystal_json(const std::string& json_text);

}  // namespace spdc

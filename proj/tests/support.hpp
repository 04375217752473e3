#pragma once

#include <string>

#include "dfd/materials.hpp"

namespace dfd::testing {

inline std::string data_path(const std::string& rel) { return std::string(DFD_SOURCE_DATA_DIR) + "/" + rel; }

inline std::string scenario_path(const std::string& name) { return data_path("scenarios/" + name); }

inline const MaterialDatabase& materials() {
  static const MaterialDatabase db = load_materials(data_path("materials.csv"));
  return db;
}

}  // namespace dfd::testing

#pragma once

#include <string>

#include <json.hpp>

#include "piecewise.hpp"
#include "weights.hpp"

namespace bubblex {

MeshPtr mesh_from_json(const nlohmann::json& j);
nlohmann::json mesh_to_json(const Mesh& mesh);

// Cells are keyed by "v0,v1,..", components by the differential bitmask and
// monomials by comma-separated exponents.
PiecewiseForm form_from_json(const MeshPtr& mesh, const nlohmann::json& j);
nlohmann::json form_to_json(const PiecewiseForm& u);

nlohmann::json weights_to_json(const WeightSystem& ws);
std::string weights_hash(const WeightSystem& ws);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
MeshPtr load_mesh(const std::string& path);
PiecewiseForm load_form(const MeshPtr& mesh, const std::string& path);

std::string simplex_key(const Simplex& s);
Simplex parse_simplex_key(const std::string& s);

}  // namespace bubblex

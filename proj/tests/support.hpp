#pragma once

#include <string>

#include "io.hpp"
#include "mesh.hpp"

namespace bxtest {

inline bubblex::MeshPtr fixture(const std::string& name) {
    return bubblex::load_mesh(std::string(BUBBLEX_FIXTURES_DIR) + "/" + name + ".json");
}

inline bubblex::Q q(long n, long d = 1) { return bubblex::ratio(n, d); }

// Global barycentric coordinate of a vertex at x inside `cell`.
inline bubblex::Q hat_at(const bubblex::Mesh& m, int cell, int vertex, const std::vector<bubblex::Q>& x) {
    const auto& verts = m.cell(cell).verts;
    int p = bubblex::position(verts, vertex);
    if (p < 0) return 0;
    return m.barycentric(cell, x)[p];
}

}  // namespace bxtest

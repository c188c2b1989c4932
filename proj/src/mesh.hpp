#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "form.hpp"
#include "poly.hpp"

namespace bubblex {

// Strictly increasing global vertex indices; the empty vector is the empty simplex.
using Simplex = std::vector<int>;

inline int sdim(const Simplex& s) { return static_cast<int>(s.size()) - 1; }
bool is_face(const Simplex& g, const Simplex& f);  // g subset of f
Simplex simplex_union(const Simplex& a, const Simplex& b);
Simplex simplex_minus(const Simplex& a, const Simplex& b);
bool disjoint(const Simplex& a, const Simplex& b);
int position(const Simplex& s, int v);  // 0-based, -1 if absent
std::vector<Simplex> all_faces(const Simplex& f);  // every subset, empty one included
std::string simplex_str(const Simplex& s);       // "[0,1,2]"

struct CellGeom {
    Simplex verts;
    std::vector<Poly> lambda;              // barycentric coordinates as affine polynomials in x
    std::vector<std::vector<Q>> grad;      // their constant gradients
    Q volume;
    int orientation = 1;
};

// The link f* of a simplex with the orientation of its top simplices.
struct Link {
    Simplex f;
    int top = 0;                                   // dimension of f*
    std::vector<std::vector<Simplex>> simplices;   // by dimension 0..top
    std::map<Simplex, int> top_sign;               // o(e, <e,f>) for e of dimension top
    std::vector<std::map<Simplex, int>> index;     // position inside simplices[d]

    int num_vertices() const { return simplices.empty() ? 0 : static_cast<int>(simplices[0].size()); }
    const std::vector<Simplex>& of_dim(int d) const;  // d = -1 gives {empty}
    bool contains(const Simplex& e) const;
};

struct ShapeStats {
    double shape_constant = 0;               // max diam / inscribed diameter
    std::map<Simplex, double> h;             // max diameter over the extended star
    int overlap = 0;                         // max number of extended stars covering a cell
};

class Mesh {
  public:
    static std::shared_ptr<const Mesh> build(std::vector<std::vector<Q>> coords,
                                             std::vector<std::vector<int>> cells);

    int dim() const { return n_; }
    int num_vertices() const { return static_cast<int>(coords_.size()); }
    int num_cells() const { return static_cast<int>(cells_.size()); }
    const std::vector<Q>& coords(int v) const { return coords_[v]; }
    const std::vector<Simplex>& simplices(int d) const;  // -1 <= d <= n
    int index(const Simplex& s) const;                   // -1 when not a mesh simplex
    bool has(const Simplex& s) const { return index(s) >= 0; }
    void require(const Simplex& s) const;                // throws UnknownSimplex
    const CellGeom& cell(int c) const { return cells_[c]; }
    int cell_index(const Simplex& s) const;

    const std::vector<int>& star(const Simplex& f) const;
    std::vector<int> extended_star(const Simplex& f) const;
    const Link& link(const Simplex& f) const;
    bool on_boundary(const Simplex& s) const;
    const std::vector<Simplex>& boundary_facets() const { return boundary_facets_; }

    Poly hat(int cell, int vertex) const;
    const std::vector<Q>& hat_grad(int cell, int vertex) const;
    std::vector<Q> barycentric(int cell, const std::vector<Q>& x) const;
    Q moment(int cell, uint64_t key) const;  // integral of x^key over the cell
    // Whitney form of a nonempty simplex restricted to a cell (zero if not a face).
    const Form& whitney(int cell, const Simplex& f) const;

    ShapeStats shape_stats() const;
    std::string hash() const;

    Mesh(const Mesh&) = delete;
    Mesh& operator=(const Mesh&) = delete;
    Mesh() = default;

  private:
    int n_ = 0;
    std::vector<std::vector<Q>> coords_;
    std::vector<CellGeom> cells_;
    std::vector<std::vector<Simplex>> simplices_;  // index d+1
    std::vector<std::map<Simplex, int>> index_;    // index d+1
    std::vector<std::vector<std::vector<int>>> star_;
    std::vector<Simplex> boundary_facets_;
    std::map<Simplex, bool> boundary_;
    std::map<Simplex, Link> links_;
    mutable std::mutex moment_mu_;
    mutable std::vector<std::unordered_map<uint64_t, Q>> moments_;
    mutable std::mutex whitney_mu_;
    mutable std::map<std::pair<int, Simplex>, Form> whitney_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

}  // namespace bubblex

#pragma once

#include <cstdint>
#include <random>

#include "piecewise.hpp"

namespace bubblex {

// Seeded source of small rationals in [-1, 1].
class RationalRng {
  public:
    explicit RationalRng(uint64_t seed) : gen_(seed) {}
    Q unit();
    int uniform(int lo, int hi);  // inclusive
    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

// A conforming random k-form in P_r (or the trimmed space P_r^- when `trimmed`),
// built from global Cartesian polynomials and products of hat functions.
PiecewiseForm random_form(const MeshPtr& mesh, int k, int r, bool trimmed, uint64_t seed, int terms = 4);

// A conforming k-form supported in one cell: the cell bubble times a random form.
PiecewiseForm cell_perturbation(const MeshPtr& mesh, int k, int cell, uint64_t seed);

// A random point strictly inside a cell.
std::vector<Q> random_interior_point(const Mesh& mesh, int cell, RationalRng& rng);

}  // namespace bubblex

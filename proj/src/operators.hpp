#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <utility>

#include "piecewise.hpp"
#include "weights.hpp"

namespace bubblex {

// G_f^* u on one cell, in the variables y_0..y_{n-1} followed by lambda_0..lambda_{p-1}.
Form contraction_pullback(const Mesh& mesh, const Form& u_cell, const Simplex& f);

// The component of a form on the product space with exactly j differentials among
// the first `ny` variables.
Form bidegree_part(const Form& w, int ny, int j);

// Exterior derivative in the variables [lo, lo+count) only.
Form partial_exterior_derivative(const Form& w, int lo, int count);

// Evaluates lambda -> int (Pi_j G_f^* u)_lambda ^ weight. The weight has degree n-j
// and is supported in the star of f.
class Reducer {
  public:
    Reducer(const WeightSystem& ws, const PiecewiseForm& u);

    const PiecewiseForm& input() const { return u_; }
    const WeightSystem& weights() const { return ws_; }

    RefForm generic(const Cochain& weight, const Simplex& f, int j) const;
    RefForm average(const Simplex& f) const;                    // A_f
    RefForm reduce(const Simplex& e, const Simplex& f) const;    // R_{e,f}
    RefForm reduce_q(const Simplex& e, const Simplex& f) const;  // Q_{e,f}

  private:
    const Form& pulled(const Simplex& f, int cell) const;
    template <class Fn>
    RefForm memo(int tag, const Simplex& e, const Simplex& f, Fn&& compute) const;

    const WeightSystem& ws_;
    PiecewiseForm u_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<Simplex, int>, Form> cache_;
    mutable std::map<std::tuple<int, Simplex, Simplex>, RefForm> results_;
};

RefForm generic_reduce(const WeightSystem& ws, const PiecewiseForm& u, const Cochain& weight, const Simplex& f, int j);

}  // namespace bubblex

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mesh.hpp"
#include "rational.hpp"

namespace bubblex {

// Rational j-chain keyed by simplex; absent keys are zero.
using Chain = std::map<Simplex, Q>;

void chain_add(Chain& c, const Simplex& s, const Q& v);

// The complex on which chains live: the whole mesh or the link of a simplex.
class Carrier {
  public:
    static Carrier whole(const Mesh& mesh) { return Carrier(&mesh, nullptr); }
    static Carrier of_link(const Link& link) { return Carrier(nullptr, &link); }

    int top() const;
    const std::vector<Simplex>& simplices(int d) const;

  private:
    Carrier(const Mesh* m, const Link* l) : mesh_(m), link_(l) {}
    const Mesh* mesh_;
    const Link* link_;
};

// (d c)_s = sum over t = s + x of (-1)^{sigma_t(x)} c_t; degree 0 maps to the empty key.
Chain boundary(const Chain& c);
// (delta c)_t = sum_i (-1)^i c_{t minus t_i} for t in the carrier; j = -1 spreads c_empty.
Chain coboundary(const Carrier& carrier, const Chain& c, int j);
// The closing arrow of the link complex: sum over top simplices of o(e,<e,f>) c_e.
Q top_coboundary(const Link& link, const Chain& c);

enum class PotentialBranch { Gauge, GaugeDropped };

struct PotentialResult {
    std::vector<Chain> columns;
    PotentialBranch branch = PotentialBranch::Gauge;
};

// For each right-hand side c in C_k(f*) with boundary zero, finds c~ in C_{k+1}(f*)
// with boundary c~ = c and delta c~ = 0. The gauge is dropped only when the boundary
// map alone is injective and the gauged system is inconsistent.
PotentialResult solve_potential(const Link& link, int k, const std::vector<Chain>& rhs);

// Coefficients c over {g in Delta_q : g contains f, g not on the boundary} with
// delta c = target and boundary c = 0 on simplices containing f.
Chain solve_trimmed_local(const Mesh& mesh, const Simplex& f, int q, const Chain& target);

// Pair families indexed by (e,f).
using Pair = std::pair<Simplex, Simplex>;

template <class V>
using PairFamily = std::map<Pair, V>;

// All (e,f) with f in Delta_m and e in Delta_j(f*).
std::vector<Pair> pair_set(const Mesh& mesh, int j, int m);

// (delta w)_{e,f} = sum_i (-1)^i w_{e(^x_i), f}.
template <class V>
V pair_delta(const PairFamily<V>& w, const Simplex& e, const Simplex& f, V zero) {
    V out = zero;
    for (size_t i = 0; i < e.size(); ++i) {
        Simplex ei = e;
        ei.erase(ei.begin() + static_cast<long>(i));
        auto it = w.find({ei, f});
        if (it == w.end()) continue;
        if (i & 1)
            out -= it->second;
        else
            out += it->second;
    }
    return out;
}

// (delta+ w)_{e,f} = sum_i (-1)^i w_{e(^x_i), <x_i,f>}.
template <class V>
V pair_delta_plus(const PairFamily<V>& w, const Simplex& e, const Simplex& f, V zero) {
    V out = zero;
    for (size_t i = 0; i < e.size(); ++i) {
        Simplex ei = e;
        ei.erase(ei.begin() + static_cast<long>(i));
        auto it = w.find({ei, simplex_union(f, Simplex{e[i]})});
        if (it == w.end()) continue;
        if (i & 1)
            out -= it->second;
        else
            out += it->second;
    }
    return out;
}

}  // namespace bubblex

#include "operators.hpp"

#include "errors.hpp"

namespace bubblex {

Form contraction_pullback(const Mesh& mesh, const Form& u_cell, const Simplex& f) {
    const int n = mesh.dim();
    const int p = static_cast<int>(f.size());
    if (n + p > kMaxVars) fail(Err::DegreeOverflow, "too many variables for the contraction of " + simplex_str(f));
    std::vector<Poly> map;
    for (int a = 0; a < n; ++a) {
        Poly x = Poly::var(a);
        for (int i = 0; i < p; ++i) x += Poly::var(n + i) * (Poly(mesh.coords(f[i])[a]) - Poly::var(a));
        map.push_back(std::move(x));
    }
    return pullback(u_cell, map, n + p);
}

Form bidegree_part(const Form& w, int ny, int j) {
    const uint32_t ymask = (uint32_t{1} << ny) - 1;
    Form out(w.nvars(), w.degree());
    for (const auto& [mask, p] : w.components())
        if (popcount(mask & ymask) == j) out.add(mask, p);
    return out;
}

Form partial_exterior_derivative(const Form& w, int lo, int count) {
    Form out(w.nvars(), w.degree() + 1);
    for (const auto& [mask, p] : w.components())
        for (int v = lo; v < lo + count; ++v) {
            const uint32_t bit = uint32_t{1} << v;
            if (mask & bit) continue;
            Poly dp = p.derivative(v);
            if (dp.is_zero()) continue;
            out.add(mask | bit, dp * Q(wedge_sign(bit, mask)));
        }
    return out;
}

Reducer::Reducer(const WeightSystem& ws, const PiecewiseForm& u) : ws_(ws), u_(u) {
    if (u.mesh != ws.mesh) fail(Err::MeshMismatch, "form and weight system live on different meshes");
}

const Form& Reducer::pulled(const Simplex& f, int cell) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(f, cell);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Form g = contraction_pullback(*ws_.mesh, u_.cells[cell], f);
    return cache_.emplace(key, std::move(g)).first->second;
}

RefForm Reducer::generic(const Cochain& weight, const Simplex& f, int j) const {
    const Mesh& M = *ws_.mesh;
    const int n = M.dim();
    const int k = u_.k;
    const int p = static_cast<int>(f.size());
    if (j < 0 || j > k) return RefForm::zero(f, std::max(k - j, 0));
    if (!weight.is_zero() && weight.k != n - j) fail(Err::DegreeMismatch, "weight degree does not match the reduction order");
    const uint32_t ymask = (uint32_t{1} << n) - 1;
    const uint32_t full = ymask;
    std::map<uint32_t, std::map<uint64_t, Q>> acc;
    const auto& cells = f.empty() ? M.star(Simplex{}) : M.star(f);
    for (int c : cells) {
        Form z = materialize_on_cell(M, weight, c);
        if (z.is_zero()) continue;
        const Form& g = pulled(f, c);
        for (const auto& [mask, poly] : g.components()) {
            const uint32_t I = mask & ymask;
            if (popcount(I) != j) continue;
            const uint32_t J = mask >> n;
            for (const auto& [zmask, zpoly] : z.components()) {
                if ((I | zmask) != full) continue;
                int s = wedge_sign(I, zmask);
                if (s == 0) continue;
                auto& slot = acc[J];
                const Poly prod = poly * zpoly;
                for (const auto& [key, coef] : prod.terms()) {
                    Q v = coef * M.moment(c, mono::slice(key, 0, n));
                    if (s < 0) v = -v;
                    slot[mono::slice(key, n, p)] += v;
                }
            }
        }
    }
    RefForm out = RefForm::zero(f, k - j);
    for (const auto& [J, terms] : acc) {
        std::vector<Poly::Term> t(terms.begin(), terms.end());
        out.form.add(J, Poly::from_terms(std::move(t)));
    }
    return out;
}

template <class Fn>
RefForm Reducer::memo(int tag, const Simplex& e, const Simplex& f, Fn&& compute) const {
    auto key = std::make_tuple(tag, e, f);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = results_.find(key);
        if (it != results_.end()) return it->second;
    }
    RefForm r = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return results_.emplace(key, std::move(r)).first->second;
}

RefForm Reducer::average(const Simplex& f) const {
    return memo(0, Simplex{}, f, [&] { return generic(ws_.average(f), f, 0); });
}

RefForm Reducer::reduce(const Simplex& e, const Simplex& f) const {
    const int j = sdim(e);
    if (j > u_.k) return RefForm::zero(f, 0);
    return memo(1, e, f, [&] { return generic(ws_.weight_z(e, f), f, j); });
}

RefForm Reducer::reduce_q(const Simplex& e, const Simplex& f) const {
    const int j = sdim(e);
    if (u_.k < j + 1) return RefForm::zero(f, 0);
    return memo(2, e, f, [&] { return generic(ws_.weight_w(e, f), f, j + 1); });
}

RefForm generic_reduce(const WeightSystem& ws, const PiecewiseForm& u, const Cochain& weight, const Simplex& f, int j) {
    return Reducer(ws, u).generic(weight, f, j);
}

}  // namespace bubblex

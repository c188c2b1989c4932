#include "random_forms.hpp"

#include <algorithm>

#include "errors.hpp"

namespace bubblex {

Q RationalRng::unit() {
    int den = uniform(1, 6);
    int num = uniform(-den, den);
    return ratio(num, den);
}

int RationalRng::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

namespace {

Poly random_poly(int nvars, int degree, RationalRng& rng) {
    std::vector<Poly::Term> t;
    const int count = rng.uniform(1, 3);
    for (int i = 0; i < count; ++i) {
        int d = rng.uniform(0, std::max(degree, 0));
        uint64_t key = 0;
        for (int s = 0; s < d; ++s) key += mono::unit(rng.uniform(0, nvars - 1));
        t.emplace_back(key, rng.unit());
    }
    return Poly::from_terms(std::move(t));
}

uint32_t random_mask(int n, int k, RationalRng& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    uint32_t m = 0;
    for (int i = 0; i < k; ++i) m |= uint32_t{1} << idx[i];
    return m;
}

Form dhat(const Mesh& mesh, int cell, int v) {
    const int n = mesh.dim();
    Form f(n, 1);
    const auto& g = mesh.hat_grad(cell, v);
    for (int a = 0; a < n; ++a)
        if (sgn(g[a]) != 0) f.add(uint32_t{1} << a, Poly(g[a]));
    return f;
}

// A product of `deg` hat functions of vertices of a random cell.
std::vector<int> random_hat_monomial(const Mesh& mesh, int deg, RationalRng& rng) {
    const auto& T = mesh.cell(rng.uniform(0, mesh.num_cells() - 1)).verts;
    std::vector<int> vs;
    for (int i = 0; i < deg; ++i) vs.push_back(T[rng.uniform(0, static_cast<int>(T.size()) - 1)]);
    return vs;
}

Poly hat_product(const Mesh& mesh, int cell, const std::vector<int>& vs) {
    Poly p(Q(1));
    for (int v : vs) p = p * mesh.hat(cell, v);
    return p;
}

}  // namespace

PiecewiseForm random_form(const MeshPtr& mesh, int k, int r, bool trimmed, uint64_t seed, int terms) {
    const Mesh& M = *mesh;
    const int n = M.dim();
    if (k < 0 || k > n) fail(Err::InvalidArgument, "form degree out of range");
    if (r < 1) fail(Err::InvalidArgument, "polynomial degree must be at least 1");
    RationalRng rng(seed);
    PiecewiseForm u = PiecewiseForm::zero(mesh, k);
    const int cart_deg = trimmed ? r - 1 : r;
    for (int t = 0; t < terms; ++t) {
        Form g(n, k);
        g.add(random_mask(n, k, rng), random_poly(n, cart_deg, rng));
        u += global_form(mesh, g);

        const Q c = rng.unit();
        if (trimmed) {
            // hat monomial of degree <= r-1 times a Whitney form
            auto vs = random_hat_monomial(M, rng.uniform(0, r - 1), rng);
            const auto& e = M.simplices(k)[rng.uniform(0, static_cast<int>(M.simplices(k).size()) - 1)];
            PiecewiseForm w = whitney(mesh, e);
            for (int cell = 0; cell < M.num_cells(); ++cell) w.cells[cell] *= hat_product(M, cell, vs);
            u += w * c;
        } else {
            // hat monomial of degree <= r times differentials of hats
            auto vs = random_hat_monomial(M, rng.uniform(0, r), rng);
            auto ds = random_hat_monomial(M, k, rng);
            PiecewiseForm w = PiecewiseForm::zero(mesh, k);
            for (int cell = 0; cell < M.num_cells(); ++cell) {
                Form f = Form::scalar(n, hat_product(M, cell, vs));
                for (int v : ds) f = wedge(f, dhat(M, cell, v));
                w.cells[cell] = f;
            }
            u += w * c;
        }
    }
    return u;
}

PiecewiseForm cell_perturbation(const MeshPtr& mesh, int k, int cell, uint64_t seed) {
    const Mesh& M = *mesh;
    const int n = M.dim();
    RationalRng rng(seed);
    PiecewiseForm u = PiecewiseForm::zero(mesh, k);
    Poly bubble(Q(1));
    for (int v : M.cell(cell).verts) bubble = bubble * M.hat(cell, v);
    Form g(n, k);
    g.add(random_mask(n, k, rng), random_poly(n, 1, rng) + Poly(Q(1)));
    u.cells[cell] = g * bubble;
    return u;
}

std::vector<Q> random_interior_point(const Mesh& mesh, int cell, RationalRng& rng) {
    const auto& T = mesh.cell(cell).verts;
    std::vector<Q> w;
    Q total = 0;
    for (size_t i = 0; i < T.size(); ++i) {
        w.push_back(Q(rng.uniform(1, 9)));
        total += w.back();
    }
    std::vector<Q> x(mesh.dim(), Q(0));
    for (size_t i = 0; i < T.size(); ++i)
        for (int a = 0; a < mesh.dim(); ++a) x[a] += w[i] / total * mesh.coords(T[i])[a];
    return x;
}

}  // namespace bubblex

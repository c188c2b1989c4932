#include "transform.hpp"

#include <algorithm>
#include <memory>

#include "errors.hpp"
#include "parallel.hpp"
#include "random_forms.hpp"

namespace bubblex {

namespace {

Q alt_sign(int e) { return (e & 1) ? Q(-1) : Q(1); }

}  // namespace

PiecewiseForm Transform::w_part(const PiecewiseForm& u) const {
    const MeshPtr& mesh = ws_.mesh;
    const int k = u.k;
    PiecewiseForm W = PiecewiseForm::zero(mesh, k);
    for (const auto& e : mesh->simplices(k)) {
        const Cochain& z = ws_.weight_z(e, Simplex{});
        Q v = 0;
        for (int c = 0; c < mesh->num_cells(); ++c) {
            Form zc = materialize_on_cell(*mesh, z, c);
            if (zc.is_zero() || u.cells[c].is_zero()) continue;
            v += integrate_cell(*mesh, wedge(u.cells[c], zc), c);
        }
        if (sgn(v) != 0) W += whitney(mesh, e) * v;
    }
    return W * alt_sign(k - 1);
}

PiecewiseForm Transform::k_op(const Reducer& ru, const Reducer* rdu, int m, KBranch branch, const Simplex& f) const {
    const MeshPtr& mesh = ws_.mesh;
    const Mesh& M = *mesh;
    const int n = M.dim();
    const int k = ru.input().k;
    PiecewiseForm out = PiecewiseForm::zero(mesh, k);
    const auto faces = all_faces(f);

    if (branch == KBranch::SameLevel) {
        if (m < 0 || m > n - 1 || sdim(f) != m) fail(Err::InvalidArgument, "K_{m,f} needs f of dimension m <= n-1");
        RefForm A = ru.average(f);
        for (int c = 0; c < M.num_cells(); ++c) {
            Form acc(n, k);
            for (const auto& g : faces) {
                Form t = pullback_corner_on_cell(M, c, g, A);
                if (((f.size() - g.size()) & 1) != 0)
                    acc -= t;
                else
                    acc += t;
            }
            out.cells[c] = std::move(acc);
        }
        return out;
    }

    if (m < 1 || m > n - 1 || sdim(f) != m - 1) fail(Err::InvalidArgument, "K_{m,f} needs f of dimension m-1 with 1 <= m <= n-1");
    const Link& L = M.link(f);
    const int top = L.top;
    if (top != n - m) fail(Err::Internal, "link dimension mismatch at " + simplex_str(f));

    struct Term {
        Cochain mu;        // used when !whitney
        Simplex e;         // Whitney simplex when `whitney`
        bool whitney = false;
        Q sign = 1;
        RefForm rk, rk1;   // already divided by the power of b
        bool has_k = false, has_k1 = false;
    };
    std::vector<Term> terms;
    for (int j = 1; j <= top; ++j)
        for (const auto& e : L.of_dim(j)) {
            Term t;
            t.mu = mu_cochain(ws_, e, f);
            if (j <= k) {
                t.rk = divide_by_b(ru.reduce(e, f), j);
                t.has_k = !t.rk.form.is_zero();
            }
            if (rdu && j <= k + 1) {
                t.rk1 = divide_by_b(rdu->reduce(e, f), j);
                t.has_k1 = !t.rk1.form.is_zero();
            }
            if (t.has_k || t.has_k1) terms.push_back(std::move(t));
        }
    for (const auto& e : L.of_dim(top)) {
        Term t;
        t.e = e;
        t.whitney = true;
        t.sign = alt_sign(top);
        if (k >= top + 1) {
            t.rk = divide_by_b(ru.reduce_q(e, f), top + 1);
            t.has_k = !t.rk.form.is_zero();
        }
        if (rdu && k + 1 >= top + 1) {
            t.rk1 = divide_by_b(rdu->reduce_q(e, f), top + 1);
            t.has_k1 = !t.rk1.form.is_zero();
        }
        if (t.has_k || t.has_k1) terms.push_back(std::move(t));
    }

    for (int c : M.star(f)) {
        Form X(n, std::max(k - 1, 0));
        Form Y(n, k);
        for (const auto& t : terms) {
            Form left = t.whitney ? M.whitney(c, t.e) : materialize_on_cell(M, t.mu, c);
            if (left.is_zero()) continue;
            left *= t.sign;
            for (const auto& g : faces) {
                const bool odd = ((f.size() - g.size()) & 1) != 0;
                if (t.has_k) {
                    Form w = wedge(left, pullback_corner_on_cell(M, c, g, t.rk));
                    if (odd)
                        X -= w;
                    else
                        X += w;
                }
                if (t.has_k1) {
                    Form w = wedge(left, pullback_corner_on_cell(M, c, g, t.rk1));
                    if (odd)
                        Y -= w;
                    else
                        Y += w;
                }
            }
        }
        Form K = Y;
        if (k >= 1) K += exterior_derivative(X);
        out.cells[c] = std::move(K);
    }
    return out;
}

Decomposition Transform::decompose(const PiecewiseForm& u) const {
    const MeshPtr& mesh = ws_.mesh;
    const Mesh& M = *mesh;
    const int n = M.dim();
    const int k = u.k;
    if (u.mesh != mesh) fail(Err::MeshMismatch, "form and weight system live on different meshes");
    auto conf = conformity_check(u);
    if (!conf.conforming) fail(Err::Nonconforming, "input traces disagree on " + simplex_str(conf.witness));

    Reducer ru(ws_, u);
    std::unique_ptr<Reducer> rdu;
    if (k < n) rdu = std::make_unique<Reducer>(ws_, exterior_derivative(u));

    Decomposition D;
    D.u = u;
    D.W = w_part(u);

    std::vector<KKey> keys;
    for (int m = 0; m <= n - 1; ++m)
        for (const auto& f : M.simplices(m)) keys.push_back({m, KBranch::SameLevel, f});
    for (int m = 1; m <= n - 1; ++m)
        for (const auto& f : M.simplices(m - 1)) keys.push_back({m, KBranch::LowerLevel, f});
    std::vector<PiecewiseForm> vals(keys.size());
    parallel_for(keys.size(), [&](size_t i) { vals[i] = k_op(ru, rdu.get(), keys[i].m, keys[i].branch, keys[i].f); });
    for (size_t i = 0; i < keys.size(); ++i) D.k_table.emplace(keys[i], std::move(vals[i]));

    PiecewiseForm residual = u - D.W;
    for (int m = 0; m <= n - 1; ++m)
        for (const auto& f : M.simplices(m)) {
            PiecewiseForm B = D.k_table.at({m, KBranch::SameLevel, f});
            if (m + 1 <= n - 1) B += D.k_table.at({m + 1, KBranch::LowerLevel, f});
            residual -= B;
            D.bubbles.emplace(f, std::move(B));
        }

    D.trace_zero = true;
    for (const auto& F : M.simplices(n - 1)) {
        for (int c : M.star(F))
            if (!trace_on_cell(M, residual.cells[c], c, F).is_zero()) {
                D.trace_zero = false;
                D.trace_witness = F;
                break;
            }
        if (!D.trace_zero) break;
    }

    for (const auto& T : M.simplices(n)) {
        int c = M.cell_index(T);
        PiecewiseForm B = PiecewiseForm::zero(mesh, k);
        B.cells[c] = residual.cells[c];
        D.bubbles.emplace(T, std::move(B));
    }

    PiecewiseForm total = u - D.W;
    for (const auto& [f, B] : D.bubbles) total -= B;
    D.residual_zero = total.is_zero();
    return D;
}

namespace {

int locate(const Mesh& mesh, const std::vector<Q>& x) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
        auto bc = mesh.barycentric(c, x);
        if (std::all_of(bc.begin(), bc.end(), [](const Q& q) { return sgn(q) > 0; })) return c;
    }
    fail(Err::SingularPoint, "point is not interior to a cell");
}

void pv_add(PointValue& a, const PointValue& b, const Q& s) {
    for (const auto& [m, v] : b) {
        Q& slot = a[m];
        slot += v * s;
        if (sgn(slot) == 0) a.erase(m);
    }
}

PointValue pv_wedge(const PointValue& a, const PointValue& b) {
    PointValue out;
    for (const auto& [ma, va] : a)
        for (const auto& [mb, vb] : b) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            pv_add(out, {{ma | mb, va * vb}}, Q(s));
        }
    return out;
}

struct PointFrame {
    const Mesh& mesh;
    int cell;
    std::vector<Q> x;

    Q lambda(int v) const {
        int p = position(mesh.cell(cell).verts, v);
        return p < 0 ? Q(0) : mesh.cell(cell).lambda[p].eval(x);
    }
    Q rho(const Simplex& g) const {
        Q r = 1;
        for (int v : g) r -= lambda(v);
        return r;
    }
    // (L_g^* w)(x) with zero extension in the coordinates outside g.
    PointValue pull(const RefForm& w, const Simplex& g) const {
        const int n = mesh.dim();
        std::vector<Q> pt;
        std::vector<std::vector<Q>> rows;
        for (int v : w.anchor) {
            bool in = position(g, v) >= 0;
            pt.push_back(in ? lambda(v) : Q(0));
            rows.push_back(in ? mesh.hat_grad(cell, v) : std::vector<Q>(n, Q(0)));
        }
        auto vals = w.form.eval(pt);
        if (vals.empty()) return {};
        return pullback_values(vals, rows, n);
    }
};

}  // namespace

PointValue point_eval(const PiecewiseForm& u, const std::vector<Q>& x) {
    int c = locate(*u.mesh, x);
    return u.cells[c].eval(x);
}

PointValue c_m_point_eval(const Reducer& ru, int m, const std::vector<Q>& x) {
    const WeightSystem& ws = ru.weights();
    const Mesh& M = *ws.mesh;
    const int n = M.dim();
    if (m < 0 || m > n - 1) fail(Err::InvalidArgument, "C_m needs 0 <= m <= n-1");
    PointFrame P{M, locate(M, x), x};
    PointValue out;

    for (const auto& f : M.simplices(m)) {
        RefForm A = ru.average(f);
        for (const auto& g : all_faces(f)) pv_add(out, P.pull(A, g), alt_sign(static_cast<int>(f.size() - g.size())));
    }

    for (const auto& f : M.simplices(m - 1)) {
        const int top = n - m;
        for (int j = 0; j <= top; ++j) {
            const auto& es = f.empty() ? M.simplices(j) : M.link(f).of_dim(j);
            for (const auto& e : es) {
                RefForm R = ru.reduce(e, f);
                if (R.form.is_zero()) continue;
                PointValue phi = M.whitney(P.cell, e).eval(x);
                for (const auto& g : all_faces(f)) {
                    Q rg = P.rho(g);
                    if (sgn(rg) == 0) fail(Err::SingularPoint, "rho vanishes at the sample point for " + simplex_str(g));
                    Q scale = alt_sign(j - 1) * alt_sign(static_cast<int>(f.size() - g.size()));
                    Q denom = rg;
                    for (int i = 0; i < j; ++i) denom *= rg;
                    pv_add(out, pv_wedge(phi, P.pull(R, g)), scale / denom);
                }
            }
        }
    }
    return out;
}

StabilityRatios stability_ratios(const Transform& tr, const PiecewiseForm& u) {
    Q nu = l2_inner(u, u);
    if (sgn(nu) == 0) fail(Err::InvalidArgument, "stability ratio of the zero form");
    Decomposition D = tr.decompose(u);
    Q sb = 0;
    for (const auto& [f, B] : D.bubbles) sb += l2_inner(B, B);
    return StabilityRatios{sb / nu, l2_inner(D.W, D.W) / nu};
}

StabilityReport stability_report(const WeightSystem& ws, int k, int r, int trials, uint64_t seed) {
    StabilityReport rep;
    rep.k = k;
    rep.degree = r;
    rep.trials = trials;
    rep.seed = seed;
    Transform tr(ws);
    for (int t = 0; t < trials; ++t) {
        PiecewiseForm u = random_form(ws.mesh, k, r, false, seed + static_cast<uint64_t>(t));
        if (u.is_zero()) continue;
        StabilityRatios r = stability_ratios(tr, u);
        rep.bubble_ratio.push_back(to_double(r.bubbles));
        rep.w_ratio.push_back(to_double(r.w));
    }
    auto summarize = [](std::vector<double> v, double& mx, double& med) {
        if (v.empty()) return;
        std::sort(v.begin(), v.end());
        mx = v.back();
        med = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    };
    summarize(rep.bubble_ratio, rep.bubble_max, rep.bubble_median);
    summarize(rep.w_ratio, rep.w_max, rep.w_median);
    return rep;
}

}  // namespace bubblex

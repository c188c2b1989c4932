#include "weights.hpp"

#include <algorithm>

#include "errors.hpp"
#include "parallel.hpp"

namespace bubblex {

LinkFunctions build_mu_beta(const Mesh& mesh, const Simplex& f) {
    const Link& L = mesh.link(f);
    LinkFunctions lf;
    lf.f = f;
    lf.top = L.top;
    lf.a.resize(L.top + 1);
    lf.b.resize(L.top + 1);
    const Q inv = ratio(-1, L.num_vertices());
    for (const auto& x : L.of_dim(0)) lf.a[0][x] = Chain{{Simplex{}, inv}};
    const Carrier carrier = Carrier::of_link(L);
    for (int j = 0; j <= L.top; ++j) {
        const auto& ej = L.of_dim(j);
        for (const auto& e : ej) {
            Chain b = coboundary(carrier, lf.a[j].at(e), j - 1);
            chain_add(b, e, (j & 1) ? Q(-1) : Q(1));
            lf.b[j][e] = std::move(b);
        }
        if (j == L.top) break;
        std::vector<Chain> rhs;
        for (const auto& ep : ej) {
            Chain col;
            for (const auto& e : ej) {
                auto it = lf.b[j][e].find(ep);
                if (it != lf.b[j][e].end()) chain_add(col, e, it->second);
            }
            rhs.push_back(std::move(col));
        }
        auto sol = solve_potential(L, j, rhs);
        lf.branch.push_back(sol.branch);
        for (const auto& t : L.of_dim(j + 1)) lf.a[j + 1][t] = Chain{};
        for (size_t c = 0; c < ej.size(); ++c)
            for (const auto& [t, v] : sol.columns[c]) chain_add(lf.a[j + 1][t], ej[c], v);
    }
    return lf;
}

const LinkFunctions& WeightSystem::link(const Simplex& f) const {
    auto it = links.find(f);
    if (it == links.end()) fail(Err::UnknownSimplex, "no link functions for " + simplex_str(f));
    return it->second;
}

const Cochain& WeightSystem::weight_z(const Simplex& e, const Simplex& f) const {
    auto it = z.find({e, f});
    if (it == z.end()) fail(Err::IndexMismatch, "no weight z for pair (" + simplex_str(e) + "," + simplex_str(f) + ")");
    return it->second;
}

const Cochain& WeightSystem::weight_w(const Simplex& e, const Simplex& f) const {
    auto it = w.find({e, f});
    if (it == w.end()) fail(Err::IndexMismatch, "no weight w for pair (" + simplex_str(e) + "," + simplex_str(f) + ")");
    return it->second;
}

const Cochain& WeightSystem::average(const Simplex& f) const {
    auto it = zavg.find(f);
    if (it == zavg.end()) fail(Err::UnknownSimplex, "no average weight for " + simplex_str(f));
    return it->second;
}

namespace {

Cochain zero_cochain(int k) {
    Cochain c;
    c.k = k;
    return c;
}

std::string pair_str(const Simplex& e, const Simplex& f) {
    return "(" + simplex_str(e) + "," + simplex_str(f) + ")";
}

struct LevelResult {
    LinkFunctions lf;
    std::vector<std::pair<Pair, Cochain>> w, z;
    Cochain zavg;
};

}  // namespace

WeightSystem build_weight_system(const MeshPtr& mesh) {
    const Mesh& M = *mesh;
    const int n = M.dim();
    WeightSystem ws;
    ws.mesh = mesh;
    for (const auto& T : M.simplices(n)) {
        int o = M.cell(M.cell_index(T)).orientation;
        Cochain zt = zero_cochain(n);
        zt.add(T, Q(o));
        ws.zavg[T] = zt;
        ws.w[{Simplex{}, T}] = zt * Q(-1);
    }
    for (int p = n - 1; p >= 0; --p) {
        const auto& level = M.simplices(p);
        std::vector<LevelResult> results(level.size());
        parallel_for(level.size(), [&](size_t idx) {
            const Simplex& f = level[idx];
            LevelResult& r = results[idx];
            r.lf = build_mu_beta(M, f);
            const Link& L = M.link(f);
            const int top = L.top;
            PairFamily<Cochain> zf;
            for (int j = 0; j <= top; ++j)
                for (const auto& e : L.of_dim(j)) {
                    Cochain zz = pair_delta_plus(ws.w, e, f, zero_cochain(n - j));
                    zf[{e, f}] = zz;
                    r.z.push_back({{e, f}, std::move(zz)});
                }
            for (int j = -1; j < top; ++j)
                for (const auto& ep : L.of_dim(j)) {
                    Cochain acc = zero_cochain(n - j - 1);
                    for (const auto& e : L.of_dim(j + 1)) {
                        const Chain& a = r.lf.a[j + 1].at(e);
                        auto it = a.find(ep);
                        if (it == a.end()) continue;
                        acc += zf.at({e, f}) * it->second;
                    }
                    if ((j & 1) != 0) acc *= Q(-1);
                    r.w.push_back({{ep, f}, std::move(acc)});
                }
            for (const auto& e : L.of_dim(top)) {
                Cochain rhs = zero_cochain(n - top);
                for (const auto& ep : L.of_dim(top)) {
                    auto it = r.lf.b[top].at(ep).find(e);
                    if (it == r.lf.b[top].at(ep).end()) continue;
                    rhs += zf.at({ep, f}) * it->second;
                }
                Chain c;
                try {
                    c = solve_trimmed_local(M, f, p, rhs.c);
                } catch (const Error& err) {
                    fail(err.code(), err.detail() + " at pair " + pair_str(e, f));
                }
                Cochain wc = zero_cochain(p);
                for (const auto& [g, v] : c) wc.add(g, v);
                r.w.push_back({{e, f}, std::move(wc)});
            }
            Cochain avg = zero_cochain(n);
            for (const auto& x : L.of_dim(0)) avg += ws.zavg.at(simplex_union(f, x));
            r.zavg = avg * ratio(1, L.num_vertices());
        });
        for (size_t idx = 0; idx < level.size(); ++idx) {
            auto& r = results[idx];
            for (auto& [k, v] : r.w) ws.w[k] = std::move(v);
            for (auto& [k, v] : r.z) ws.z[k] = std::move(v);
            ws.zavg[level[idx]] = std::move(r.zavg);
            ws.links[level[idx]] = std::move(r.lf);
        }
    }
    for (int j = 0; j <= n; ++j)
        for (const auto& e : M.simplices(j)) ws.z[{e, Simplex{}}] = pair_delta_plus(ws.w, e, Simplex{}, zero_cochain(n - j));
    return ws;
}

Cochain mu_cochain(const WeightSystem& ws, const Simplex& e, const Simplex& f) {
    const int j = sdim(e);
    if (j < 1) fail(Err::InvalidArgument, "mu of a vertex is a constant");
    const auto& lf = ws.link(f);
    Cochain c = zero_cochain(j - 1);
    auto it = lf.a.at(j).find(e);
    if (it == lf.a.at(j).end()) fail(Err::IndexMismatch, simplex_str(e) + " is not in the link of " + simplex_str(f));
    for (const auto& [s, v] : it->second) c.add(s, v);
    return c;
}

Cochain beta_cochain(const WeightSystem& ws, const Simplex& e, const Simplex& f) {
    const int j = sdim(e);
    const auto& lf = ws.link(f);
    if (j < 0 || j > lf.top || !lf.b[j].count(e))
        fail(Err::IndexMismatch, simplex_str(e) + " is not in the link of " + simplex_str(f));
    Cochain c = zero_cochain(j);
    for (const auto& [s, v] : lf.b[j].at(e)) c.add(s, v);
    return c;
}

PiecewiseForm beta_global(const WeightSystem& ws, const Simplex& e, const Simplex& f) {
    const MeshPtr& mesh = ws.mesh;
    const int j = sdim(e);
    const auto& lf = ws.link(f);
    PiecewiseForm rf = rho(mesh, f);
    PiecewiseForm phi = whitney(mesh, e);
    if (j == 0) {
        Q mu = lf.a[0].at(e).at(Simplex{});
        return rf * mu + phi;
    }
    PiecewiseForm mu = materialize(mesh, mu_cochain(ws, e, f));
    PiecewiseForm out = wedge(rf, exterior_derivative(mu));
    out -= wedge(exterior_derivative(rf), mu) * Q(j);
    out += (j & 1) ? phi * Q(-1) : phi;
    return out;
}

Cochain psi(const WeightSystem& ws, const Simplex& e, const Simplex& g, const Simplex& f) {
    if (!is_face(g, f)) fail(Err::IndexMismatch, simplex_str(g) + " is not a face of " + simplex_str(f));
    const int j = sdim(e);
    const auto& lf = ws.link(f);
    if (j < 0 || j > lf.top || !lf.a[j].count(e))
        fail(Err::IndexMismatch, simplex_str(e) + " is not in the link of " + simplex_str(f));
    const Mesh& M = *ws.mesh;
    Cochain out = zero_cochain(j);
    for (int x : simplex_minus(f, g))
        for (const auto& [ep, a] : lf.a[j].at(e)) {
            Simplex s = simplex_union(ep, Simplex{x});
            if (!M.has(s)) continue;
            out.add(s, (position(s, x) & 1) ? Q(-a) : a);
        }
    // (-1)^{j-1}
    if ((j & 1) == 0) out *= Q(-1);
    return out;
}

bool CertificateReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

class Checks {
  public:
    explicit Checks(CertificateReport& r) : r_(r) {}
    void record(const std::string& name, bool ok, const std::string& witness) {
        CheckResult& c = get(name);
        ++c.count;
        if (!ok && c.passed) {
            c.passed = false;
            c.witness = witness;
        }
    }
    CheckResult& get(const std::string& name) {
        for (auto& c : r_.checks)
            if (c.name == name) return c;
        r_.checks.push_back(CheckResult{name, true, "", 0});
        return r_.checks.back();
    }

  private:
    CertificateReport& r_;
};

// Whether g lies on the boundary of the star of f.
bool on_star_boundary(const Mesh& M, const Simplex& f, const Simplex& g) {
    const int n = M.dim();
    for (int c : M.star(f)) {
        const auto& T = M.cell(c).verts;
        if (!is_face(g, T)) continue;
        for (int x : T) {
            Simplex F = simplex_minus(T, Simplex{x});
            if (!is_face(g, F)) continue;
            if (!is_face(f, F) || M.star(F).size() == 1) return true;
        }
    }
    (void)n;
    return false;
}

using Tensor = std::map<std::pair<Simplex, Simplex>, Q>;

void tensor_add(Tensor& t, const Cochain& a, const Cochain& b) {
    for (const auto& [s, x] : a.c)
        for (const auto& [r, y] : b.c) {
            auto key = std::make_pair(s, r);
            Q v = t[key] + x * y;
            if (sgn(v) == 0)
                t.erase(key);
            else
                t[key] = v;
        }
}

}  // namespace

CertificateReport certify_weight_system(const WeightSystem& ws) {
    CertificateReport rep;
    Checks chk(rep);
    const Mesh& M = *ws.mesh;
    const int n = M.dim();

    for (const auto& [f, lf] : ws.links) {
        const Link& L = M.link(f);
        for (int j = 0; j <= lf.top; ++j) {
            for (const auto& ep : L.of_dim(j)) {
                Chain col;
                for (const auto& e : L.of_dim(j)) {
                    auto it = lf.b[j].at(e).find(ep);
                    if (it != lf.b[j].at(e).end()) chain_add(col, e, it->second);
                }
                chk.record("beta-closed", boundary(col).empty(), "f=" + simplex_str(f) + " e'=" + simplex_str(ep));
                if (j < lf.top) {
                    Chain acol;
                    for (const auto& t : L.of_dim(j + 1)) {
                        auto it = lf.a[j + 1].at(t).find(ep);
                        if (it != lf.a[j + 1].at(t).end()) chain_add(acol, t, it->second);
                    }
                    chk.record("mu-relation", boundary(acol) == col, "f=" + simplex_str(f) + " e'=" + simplex_str(ep));
                }
            }
            for (const auto& e : L.of_dim(j)) {
                PiecewiseForm bg = beta_global(ws, e, f);
                Cochain bc = beta_cochain(ws, e, f);
                bool ok = true;
                for (int c : M.star(f)) ok = ok && bg.cells[c] == materialize_on_cell(M, bc, c);
                chk.record("beta-expansion", ok, "f=" + simplex_str(f) + " e=" + simplex_str(e));
            }
        }
        for (size_t j = 0; j < lf.branch.size(); ++j)
            if (lf.branch[j] == PotentialBranch::GaugeDropped)
                rep.notes.push_back("link of " + simplex_str(f) + ": gauge dropped in degree " + std::to_string(j + 1));
    }

    for (const auto& [pr, zc] : ws.z) {
        const auto& [e, f] = pr;
        const int j = sdim(e);
        const std::string wit = pair_str(e, f);
        if (j >= 1) {
            Cochain rhs = pair_delta(ws.z, e, f, zero_cochain(n - j + 1)) * Q((j & 1) ? 1 : -1);
            chk.record("z-prop", coboundary(M, zc) == rhs || (coboundary(M, zc).is_zero() && rhs.is_zero()), wit);
            if (sdim(f) + 1 <= n - 1) {
                Cochain dp = pair_delta_plus(ws.z, e, f, zero_cochain(n - j + 1));
                chk.record("delta-plus-z", dp.is_zero(), wit);
            }
        } else {
            Simplex ef = simplex_union(e, f);
            Cochain expect = ws.zavg.at(ef) * Q(-1);
            chk.record("z-vertex-average", zc.c == expect.c, wit);
        }
        std::vector<int> allowed;
        auto st = M.star(f);
        auto ex = M.extended_star(e);
        std::set_intersection(st.begin(), st.end(), ex.begin(), ex.end(), std::back_inserter(allowed));
        bool supp = true, trace0 = true;
        for (const auto& [g, v] : zc.c) {
            for (int c : M.star(g))
                if (!std::binary_search(allowed.begin(), allowed.end(), c)) supp = false;
            if (M.on_boundary(g)) trace0 = false;
        }
        chk.record("z-support", supp, wit);
        chk.record("z-boundary-trace", trace0, wit);
    }

    for (const auto& [pr, wc] : ws.w) {
        const auto& [e, f] = pr;
        const int j = sdim(e);
        const std::string wit = pair_str(e, f);
        bool supp = true, trace0 = true;
        for (const auto& [g, v] : wc.c) {
            for (int c : M.star(g))
                if (!is_face(f, M.cell(c).verts)) supp = false;
            if (sdim(f) < n && on_star_boundary(M, f, g)) trace0 = false;
        }
        chk.record("w-support", supp, wit);
        chk.record("w-star-boundary-trace", trace0, wit);
        if (j >= 0 && sdim(f) <= n - 1) {
            Cochain dw = coboundary(M, wc);
            Cochain rhs = pair_delta(ws.w, e, f, zero_cochain(n - j)) - ws.weight_z(e, f);
            if ((j & 1) == 0) rhs *= Q(-1);
            chk.record("d-delta-rel", dw.c == rhs.c, wit);
        }
    }

    for (int d = 0; d <= n; ++d)
        for (const auto& f : M.simplices(d)) {
            const Cochain& zf = ws.average(f);
            chk.record("average-integral", integrate(M, zf) == 1, simplex_str(f));
            Cochain wz = ws.weight_w(Simplex{}, f) + zf;
            chk.record("w-empty-average", wz.is_zero(), simplex_str(f));
            bool supp = true;
            for (const auto& [g, v] : zf.c)
                if (!is_face(f, g)) supp = false;
            chk.record("average-support", supp, simplex_str(f));
        }

    for (int m = 0; m <= n - 1; ++m)
        for (int j = 0; j < n - m; ++j)
            for (int s = -1; s <= m - 1; ++s)
                for (const auto& g : M.simplices(s)) {
                    Tensor lhs, rhs;
                    for (const auto& [e, f] : pair_set(M, j, m))
                        if (is_face(g, f)) tensor_add(lhs, psi(ws, e, g, f), ws.weight_z(e, f));
                    for (const auto& [e, f] : pair_set(M, j, m - 1))
                        if (is_face(g, f)) {
                            Cochain phi = zero_cochain(j);
                            phi.add(e, 1);
                            tensor_add(rhs, phi, ws.weight_z(e, f));
                        }
                    chk.record("residual-idg", lhs == rhs,
                               "g=" + simplex_str(g) + " j=" + std::to_string(j) + " m=" + std::to_string(m));
                }

    Q mw = 0, mz = 0;
    for (const auto& [k, v] : ws.w) mw = std::max(mw, v.max_abs());
    for (const auto& [k, v] : ws.z) mz = std::max(mz, v.max_abs());
    rep.max_w = to_string(mw);
    rep.max_z = to_string(mz);
    return rep;
}

}  // namespace bubblex

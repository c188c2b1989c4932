#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace bubblex {

bool is_face(const Simplex& g, const Simplex& f) {
    return std::includes(f.begin(), f.end(), g.begin(), g.end());
}

Simplex simplex_union(const Simplex& a, const Simplex& b) {
    Simplex out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Simplex simplex_minus(const Simplex& a, const Simplex& b) {
    Simplex out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool disjoint(const Simplex& a, const Simplex& b) {
    Simplex out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out.empty();
}

int position(const Simplex& s, int v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) return -1;
    return static_cast<int>(it - s.begin());
}

std::vector<Simplex> all_faces(const Simplex& f) {
    std::vector<Simplex> out;
    const int k = static_cast<int>(f.size());
    for (uint32_t m = 0; m < (uint32_t{1} << k); ++m) {
        Simplex g;
        for (int i = 0; i < k; ++i)
            if (m & (uint32_t{1} << i)) g.push_back(f[i]);
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

std::string simplex_str(const Simplex& s) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ']';
    return os.str();
}

const std::vector<Simplex>& Link::of_dim(int d) const {
    static const std::vector<Simplex> empty_only{Simplex{}};
    static const std::vector<Simplex> none;
    if (d == -1) return empty_only;
    if (d < 0 || d > top || d >= static_cast<int>(simplices.size())) return none;
    return simplices[d];
}

bool Link::contains(const Simplex& e) const {
    int d = sdim(e);
    if (d == -1) return true;
    if (d < 0 || d >= static_cast<int>(index.size())) return false;
    return index[d].count(e) > 0;
}

namespace {

Q determinant(QMatrix a) {
    const int n = static_cast<int>(a.size());
    Q det = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (sgn(a[r][c]) != 0) {
                p = r;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (sgn(a[r][c]) == 0) continue;
            Q f = a[r][c] / a[c][c];
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

mpz_class factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

std::shared_ptr<const Mesh> Mesh::build(std::vector<std::vector<Q>> coords,
                                        std::vector<std::vector<int>> cells) {
    auto mesh = std::make_shared<Mesh>();
    Mesh& m = *mesh;
    if (coords.empty()) fail(Err::InconsistentDim, "mesh has no vertices");
    const int n = static_cast<int>(coords[0].size());
    if (n < 1 || n > 4) fail(Err::InconsistentDim, "spatial dimension must be between 1 and 4");
    for (const auto& x : coords)
        if (static_cast<int>(x.size()) != n)
            fail(Err::InconsistentDim, "vertex coordinate count differs from dimension");
    if (static_cast<int>(coords.size()) < n + 1)
        fail(Err::InconsistentDim, "fewer than n+1 vertices");
    if (cells.empty()) fail(Err::InconsistentDim, "mesh has no cells");
    m.n_ = n;
    m.coords_ = std::move(coords);
    const int nv = static_cast<int>(m.coords_.size());

    std::set<Simplex> seen;
    for (auto& c : cells) {
        if (static_cast<int>(c.size()) != n + 1)
            fail(Err::InconsistentDim, "cell does not have n+1 vertices");
        std::sort(c.begin(), c.end());
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] < 0 || c[i] >= nv) fail(Err::InconsistentDim, "cell vertex index out of range");
            if (i && c[i] == c[i - 1]) fail(Err::InconsistentDim, "repeated vertex in cell");
        }
        if (!seen.insert(c).second)
            fail(Err::NotADecomposition, "duplicate cell " + simplex_str(c));
    }

    // Geometry: barycentric coordinates from the inverse of [x_v; 1].
    for (const auto& c : cells) {
        CellGeom g;
        g.verts = c;
        QMatrix a(n + 1, std::vector<Q>(n + 1));
        for (int i = 0; i <= n; ++i) {
            for (int r = 0; r < n; ++r) a[r][i] = m.coords_[c[i]][r];
            a[n][i] = 1;
        }
        QMatrix e(n, std::vector<Q>(n));
        for (int i = 1; i <= n; ++i)
            for (int r = 0; r < n; ++r) e[i - 1][r] = m.coords_[c[i]][r] - m.coords_[c[0]][r];
        Q det = determinant(e);
        if (sgn(det) == 0) fail(Err::DegenerateCell, "zero volume cell " + simplex_str(c));
        g.orientation = sgn(det);
        g.volume = abs(det) / Q(factorial(n));
        QMatrix id(n + 1, std::vector<Q>(n + 1));
        for (int i = 0; i <= n; ++i) id[i][i] = 1;
        auto inv = solve_linear(a, id, n + 1);
        // Row i of inv gives lambda_i = sum_r inv[i][r] x_r + inv[i][n].
        for (int i = 0; i <= n; ++i) {
            Poly p(inv.x[i][n]);
            std::vector<Q> gr(n);
            for (int r = 0; r < n; ++r) {
                p += Poly::var(r) * inv.x[i][r];
                gr[r] = inv.x[i][r];
            }
            g.lambda.push_back(std::move(p));
            g.grad.push_back(std::move(gr));
        }
        m.cells_.push_back(std::move(g));
    }

    // Enumerate all subsimplices.
    std::vector<std::set<Simplex>> sets(n + 2);
    for (const auto& c : m.cells_)
        for (auto& f : all_faces(c.verts)) sets[f.size()].insert(f);
    m.simplices_.resize(n + 2);
    m.index_.resize(n + 2);
    m.star_.resize(n + 2);
    for (int d = -1; d <= n; ++d) {
        m.simplices_[d + 1].assign(sets[d + 1].begin(), sets[d + 1].end());
        for (size_t i = 0; i < m.simplices_[d + 1].size(); ++i)
            m.index_[d + 1][m.simplices_[d + 1][i]] = static_cast<int>(i);
        m.star_[d + 1].assign(m.simplices_[d + 1].size(), {});
    }
    if (static_cast<int>(m.simplices_[1].size()) != nv)
        fail(Err::NotADecomposition, "vertex not used by any cell");
    for (int c = 0; c < m.num_cells(); ++c)
        for (auto& f : all_faces(m.cells_[c].verts))
            m.star_[f.size()][m.index_[f.size()].at(f)].push_back(c);

    // Facet adjacency and a conservative overlap test.
    for (const auto& facet : m.simplices_[n]) {
        const auto& st = m.star_[n][m.index_[n].at(facet)];
        if (st.size() > 2)
            fail(Err::NotADecomposition, "facet " + simplex_str(facet) + " shared by more than two cells");
        if (st.size() == 1) {
            m.boundary_facets_.push_back(facet);
            continue;
        }
        int opp0 = simplex_minus(m.cells_[st[0]].verts, facet)[0];
        int opp1 = simplex_minus(m.cells_[st[1]].verts, facet)[0];
        auto bc = m.barycentric(st[0], m.coords_[opp1]);
        if (sgn(bc[position(m.cells_[st[0]].verts, opp0)]) >= 0)
            fail(Err::NotADecomposition,
                 "cells on both sides of facet " + simplex_str(facet) + " overlap");
    }
    for (int c = 0; c < m.num_cells(); ++c)
        for (int v = 0; v < nv; ++v) {
            if (position(m.cells_[c].verts, v) >= 0) continue;
            auto bc = m.barycentric(c, m.coords_[v]);
            bool inside = std::all_of(bc.begin(), bc.end(), [](const Q& q) { return sgn(q) >= 0; });
            if (inside)
                fail(Err::NotADecomposition,
                     "vertex " + std::to_string(v) + " lies in cell " + simplex_str(m.cells_[c].verts));
        }

    for (int d = -1; d <= n; ++d)
        for (const auto& s : m.simplices_[d + 1]) {
            bool b = false;
            if (d >= 0)
                for (const auto& f : m.boundary_facets_)
                    if (is_face(s, f)) {
                        b = true;
                        break;
                    }
            m.boundary_[s] = b;
        }

    // Links, including the whole mesh as the link of the empty simplex.
    for (int d = -1; d <= n - 1; ++d)
        for (const auto& f : m.simplices_[d + 1]) {
            Link L;
            L.f = f;
            L.top = n - static_cast<int>(f.size());
            L.simplices.resize(L.top + 1);
            L.index.resize(L.top + 1);
            std::vector<std::set<Simplex>> ls(L.top + 1);
            for (int c : m.star(f)) {
                const auto& T = m.cells_[c].verts;
                Simplex opp = simplex_minus(T, f);
                for (auto& g : all_faces(opp))
                    if (!g.empty()) ls[g.size() - 1].insert(g);
                int sign = m.cells_[c].orientation;
                Simplex Ti = T;
                for (int v : f) {
                    if (position(Ti, v) & 1) sign = -sign;
                    Ti.erase(Ti.begin() + position(Ti, v));
                }
                L.top_sign[opp] = sign;
            }
            for (int k = 0; k <= L.top; ++k) {
                L.simplices[k].assign(ls[k].begin(), ls[k].end());
                for (size_t i = 0; i < L.simplices[k].size(); ++i)
                    L.index[k][L.simplices[k][i]] = static_cast<int>(i);
            }
            m.links_.emplace(f, std::move(L));
        }
    m.moments_.resize(m.cells_.size());
    return mesh;
}

const std::vector<Simplex>& Mesh::simplices(int d) const {
    static const std::vector<Simplex> none;
    if (d < -1 || d > n_) return none;
    return simplices_[d + 1];
}

int Mesh::index(const Simplex& s) const {
    int d = sdim(s);
    if (d < -1 || d > n_) return -1;
    auto it = index_[d + 1].find(s);
    return it == index_[d + 1].end() ? -1 : it->second;
}

void Mesh::require(const Simplex& s) const {
    if (!has(s)) fail(Err::UnknownSimplex, "simplex " + simplex_str(s) + " is not in the mesh");
}

int Mesh::cell_index(const Simplex& s) const {
    if (sdim(s) != n_) return -1;
    const auto& st = star(s);
    return st.empty() ? -1 : st[0];
}

const std::vector<int>& Mesh::star(const Simplex& f) const {
    require(f);
    int d = sdim(f);
    return star_[d + 1][index_[d + 1].at(f)];
}

std::vector<int> Mesh::extended_star(const Simplex& f) const {
    require(f);
    if (f.empty()) return star(f);
    std::set<int> out;
    for (int v : f)
        for (int c : star(Simplex{v})) out.insert(c);
    return {out.begin(), out.end()};
}

const Link& Mesh::link(const Simplex& f) const {
    require(f);
    auto it = links_.find(f);
    if (it == links_.end())
        fail(Err::UnknownSimplex, "link requested for a cell " + simplex_str(f));
    return it->second;
}

bool Mesh::on_boundary(const Simplex& s) const {
    auto it = boundary_.find(s);
    if (it == boundary_.end()) fail(Err::UnknownSimplex, "simplex " + simplex_str(s) + " is not in the mesh");
    return it->second;
}

Poly Mesh::hat(int c, int v) const {
    int p = position(cells_[c].verts, v);
    return p < 0 ? Poly() : cells_[c].lambda[p];
}

const std::vector<Q>& Mesh::hat_grad(int c, int v) const {
    static thread_local std::vector<Q> zero;
    int p = position(cells_[c].verts, v);
    if (p < 0) {
        zero.assign(n_, Q(0));
        return zero;
    }
    return cells_[c].grad[p];
}

std::vector<Q> Mesh::barycentric(int c, const std::vector<Q>& x) const {
    std::vector<Q> out;
    for (const auto& l : cells_[c].lambda) out.push_back(l.eval(x));
    return out;
}

Q Mesh::moment(int c, uint64_t key) const {
    {
        std::lock_guard<std::mutex> lock(moment_mu_);
        auto it = moments_[c].find(key);
        if (it != moments_[c].end()) return it->second;
    }
    const auto& T = cells_[c];
    // x_a = sum_v mu_v X_{v,a}; integrate the expansion in barycentric monomials.
    Poly p(Q(1));
    for (int a = 0; a < n_; ++a) {
        int e = mono::exp(key, a);
        if (!e) continue;
        Poly xa;
        for (int v = 0; v <= n_; ++v) xa += Poly::var(v) * coords_[T.verts[v]][a];
        p = p * xa.pow(e);
    }
    Q total = 0;
    const mpz_class nf = factorial(n_);
    for (const auto& [k, coef] : p.terms()) {
        mpz_class num = nf;
        for (int v = 0; v <= n_; ++v) num *= factorial(mono::exp(k, v));
        total += coef * ratio(num, factorial(mono::degree(k) + n_));
    }
    total *= T.volume;
    total.canonicalize();
    std::lock_guard<std::mutex> lock(moment_mu_);
    moments_[c].emplace(key, total);
    return total;
}

const Form& Mesh::whitney(int c, const Simplex& f) const {
    if (f.empty()) fail(Err::UnknownSimplex, "no Whitney form for the empty simplex");
    auto key = std::make_pair(c, f);
    {
        std::lock_guard<std::mutex> lock(whitney_mu_);
        auto it = whitney_.find(key);
        if (it != whitney_.end()) return it->second;
    }
    const int m = sdim(f);
    Form phi(n_, m);
    if (is_face(f, cells_[c].verts)) {
        std::vector<Form> dl;
        for (int v : f) {
            Form d(n_, 1);
            const auto& g = hat_grad(c, v);
            for (int r = 0; r < n_; ++r) d.add(uint32_t{1} << r, Poly(g[r]));
            dl.push_back(std::move(d));
        }
        Q mf = Q(factorial(m));
        for (int i = 0; i <= m; ++i) {
            Form t = Form::scalar(n_, hat(c, f[i]));
            for (int l = 0; l <= m; ++l)
                if (l != i) t = wedge(t, dl[l]);
            t *= (i & 1) ? Q(-mf) : mf;
            phi += t;
        }
    }
    std::lock_guard<std::mutex> lock(whitney_mu_);
    return whitney_.emplace(key, std::move(phi)).first->second;
}

ShapeStats Mesh::shape_stats() const {
    ShapeStats st;
    std::vector<double> diam(cells_.size());
    auto dist = [&](int a, int b) {
        double s = 0;
        for (int r = 0; r < n_; ++r) {
            double d = to_double(coords_[a][r] - coords_[b][r]);
            s += d * d;
        }
        return std::sqrt(s);
    };
    for (size_t c = 0; c < cells_.size(); ++c) {
        const auto& T = cells_[c];
        double dm = 0;
        for (int i = 0; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j) dm = std::max(dm, dist(T.verts[i], T.verts[j]));
        diam[c] = dm;
        // Inscribed radius r = n |T| / sum of facet measures; facet measure from the
        // gradient norms since |F_i| = n |T| |grad lambda_i|.
        double facet_sum = 0;
        double vol = to_double(T.volume);
        for (int i = 0; i <= n_; ++i) {
            double g = 0;
            for (int r = 0; r < n_; ++r) g += to_double(T.grad[i][r] * T.grad[i][r]);
            facet_sum += n_ * vol * std::sqrt(g);
        }
        double radius = n_ * vol / facet_sum;
        st.shape_constant = std::max(st.shape_constant, dm / (2 * radius));
    }
    std::vector<int> cover(cells_.size(), 0);
    for (int d = 0; d <= n_; ++d)
        for (const auto& f : simplices(d)) {
            double h = 0;
            for (int c : extended_star(f)) {
                h = std::max(h, diam[c]);
                ++cover[c];
            }
            st.h[f] = h;
        }
    st.overlap = *std::max_element(cover.begin(), cover.end());
    return st;
}

std::string Mesh::hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    };
    mix(std::to_string(n_));
    for (const auto& x : coords_)
        for (const auto& q : x) mix(to_string(q));
    for (const auto& c : cells_) mix(simplex_str(c.verts));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bubblex

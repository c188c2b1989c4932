#include "piecewise.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"

namespace bubblex {

namespace {

void same_mesh(const PiecewiseForm& a, const PiecewiseForm& b) {
    if (a.mesh != b.mesh) fail(Err::MeshMismatch, "forms live on different meshes");
}

}  // namespace

PiecewiseForm PiecewiseForm::zero(MeshPtr mesh, int k) {
    PiecewiseForm u;
    u.k = k;
    u.cells.assign(mesh->num_cells(), Form(mesh->dim(), k));
    u.mesh = std::move(mesh);
    return u;
}

bool PiecewiseForm::is_zero() const {
    return std::all_of(cells.begin(), cells.end(), [](const Form& f) { return f.is_zero(); });
}

int PiecewiseForm::poly_degree() const {
    int d = -1;
    for (const auto& f : cells) d = std::max(d, f.poly_degree());
    return d;
}

bool PiecewiseForm::operator==(const PiecewiseForm& o) const {
    if (mesh != o.mesh) return false;
    for (size_t c = 0; c < cells.size(); ++c)
        if (cells[c] != o.cells[c]) return false;
    return true;
}

PiecewiseForm& PiecewiseForm::operator+=(const PiecewiseForm& o) {
    same_mesh(*this, o);
    if (o.is_zero()) return *this;
    if (is_zero()) k = o.k;
    if (k != o.k) fail(Err::DegreeMismatch, "adding forms of different degree");
    for (size_t c = 0; c < cells.size(); ++c) cells[c] += o.cells[c];
    return *this;
}

PiecewiseForm& PiecewiseForm::operator-=(const PiecewiseForm& o) {
    same_mesh(*this, o);
    if (o.is_zero()) return *this;
    if (is_zero()) k = o.k;
    if (k != o.k) fail(Err::DegreeMismatch, "subtracting forms of different degree");
    for (size_t c = 0; c < cells.size(); ++c) cells[c] -= o.cells[c];
    return *this;
}

PiecewiseForm& PiecewiseForm::operator*=(const Q& q) {
    for (auto& f : cells) f *= q;
    return *this;
}

PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b) {
    same_mesh(a, b);
    if (a.k + b.k > a.mesh->dim()) fail(Err::DegreeOverflow, "wedge degree exceeds dimension");
    PiecewiseForm out = PiecewiseForm::zero(a.mesh, a.k + b.k);
    for (size_t c = 0; c < a.cells.size(); ++c) out.cells[c] = wedge(a.cells[c], b.cells[c]);
    return out;
}

PiecewiseForm exterior_derivative(const PiecewiseForm& a) {
    PiecewiseForm out = PiecewiseForm::zero(a.mesh, a.k + 1);
    for (size_t c = 0; c < a.cells.size(); ++c) out.cells[c] = exterior_derivative(a.cells[c]);
    return out;
}

PiecewiseForm koszul(const PiecewiseForm& a) {
    PiecewiseForm out = PiecewiseForm::zero(a.mesh, std::max(a.k - 1, 0));
    for (size_t c = 0; c < a.cells.size(); ++c) out.cells[c] = koszul(a.cells[c]);
    return out;
}

PiecewiseForm whitney(const MeshPtr& mesh, const Simplex& f) {
    mesh->require(f);
    PiecewiseForm out = PiecewiseForm::zero(mesh, sdim(f));
    for (int c : mesh->star(f)) out.cells[c] = mesh->whitney(c, f);
    return out;
}

PiecewiseForm hat(const MeshPtr& mesh, int vertex) {
    mesh->require(Simplex{vertex});
    PiecewiseForm out = PiecewiseForm::zero(mesh, 0);
    for (int c : mesh->star(Simplex{vertex})) out.cells[c] = Form::scalar(mesh->dim(), mesh->hat(c, vertex));
    return out;
}

PiecewiseForm rho(const MeshPtr& mesh, const Simplex& f) {
    mesh->require(f);
    PiecewiseForm out = PiecewiseForm::zero(mesh, 0);
    for (int c = 0; c < mesh->num_cells(); ++c) {
        Poly p(Q(1));
        for (int v : f) p -= mesh->hat(c, v);
        out.cells[c] = Form::scalar(mesh->dim(), p);
    }
    return out;
}

PiecewiseForm global_form(const MeshPtr& mesh, const Form& f) {
    PiecewiseForm out = PiecewiseForm::zero(mesh, f.degree());
    for (auto& c : out.cells) c = f;
    return out;
}

Form trace_on_cell(const Mesh& mesh, const Form& u, int cell, const Simplex& face) {
    const int d = sdim(face);
    if (!is_face(face, mesh.cell(cell).verts)) fail(Err::NotAFace, simplex_str(face) + " is not a face of the cell");
    if (u.degree() > d || d < 0) return Form(std::max(d, 0), u.degree());
    const auto& x0 = mesh.coords(face[0]);
    std::vector<Poly> map;
    for (int a = 0; a < mesh.dim(); ++a) {
        Poly p(x0[a]);
        for (int s = 1; s <= d; ++s) p += Poly::var(s - 1) * (mesh.coords(face[s])[a] - x0[a]);
        map.push_back(std::move(p));
    }
    return pullback(u, map, d);
}

Form trace(const PiecewiseForm& u, const Simplex& face) {
    u.mesh->require(face);
    const auto& st = u.mesh->star(face);
    Form first = trace_on_cell(*u.mesh, u.cells[st[0]], st[0], face);
    for (size_t i = 1; i < st.size(); ++i)
        if (trace_on_cell(*u.mesh, u.cells[st[i]], st[i], face) != first)
            fail(Err::Nonconforming, "traces disagree on " + simplex_str(face));
    return first;
}

Conformity conformity_check(const PiecewiseForm& u) {
    const Mesh& m = *u.mesh;
    for (int d = m.dim() - 1; d >= std::max(u.k, 0); --d)
        for (const auto& s : m.simplices(d)) {
            const auto& st = m.star(s);
            if (st.size() < 2) continue;
            Form first = trace_on_cell(m, u.cells[st[0]], st[0], s);
            for (size_t i = 1; i < st.size(); ++i)
                if (trace_on_cell(m, u.cells[st[i]], st[i], s) != first) return {false, s};
        }
    return {};
}

Q integrate_cell(const Mesh& mesh, const Form& w, int cell) {
    const int n = mesh.dim();
    if (w.is_zero()) return 0;
    if (w.degree() != n) fail(Err::DegreeMismatch, "integrand is not a top-degree form");
    Q s = 0;
    for (const auto& [key, coef] : w.component((uint32_t{1} << n) - 1).terms()) s += coef * mesh.moment(cell, key);
    return s;
}

Q integrate(const PiecewiseForm& w) {
    if (!w.is_zero() && w.k != w.mesh->dim()) fail(Err::DegreeMismatch, "integrand is not a top-degree form");
    Q s = 0;
    for (int c = 0; c < w.mesh->num_cells(); ++c) s += integrate_cell(*w.mesh, w.cells[c], c);
    return s;
}

Q l2_inner(const PiecewiseForm& u, const PiecewiseForm& v) {
    same_mesh(u, v);
    if (!u.is_zero() && !v.is_zero() && u.k != v.k) fail(Err::DegreeMismatch, "inner product of forms of different degree");
    Q s = 0;
    for (int c = 0; c < u.mesh->num_cells(); ++c)
        for (const auto& [mask, p] : u.cells[c].components()) {
            const Poly& q = v.cells[c].component(mask);
            if (q.is_zero()) continue;
            const Poly pq = p * q;
            for (const auto& [key, coef] : pq.terms()) s += coef * u.mesh->moment(c, key);
        }
    return s;
}

bool in_space(const Form& u, Space space, int r) {
    if (u.poly_degree() > r) return false;
    if (space == Space::P) return true;
    return koszul(u.homogeneous_part(r)).is_zero();
}

bool membership(const PiecewiseForm& u, Space space, int r) {
    return std::all_of(u.cells.begin(), u.cells.end(), [&](const Form& f) { return in_space(f, space, r); });
}

void Cochain::add(const Simplex& s, const Q& v) {
    if (sgn(v) == 0) return;
    auto it = c.find(s);
    if (it == c.end()) {
        c.emplace(s, v);
        return;
    }
    it->second += v;
    if (sgn(it->second) == 0) c.erase(it);
}

Cochain& Cochain::operator+=(const Cochain& o) {
    if (c.empty()) k = o.k;
    for (const auto& [s, v] : o.c) add(s, v);
    return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
    if (c.empty()) k = o.k;
    for (const auto& [s, v] : o.c) add(s, -v);
    return *this;
}

Cochain& Cochain::operator*=(const Q& q) {
    if (sgn(q) == 0) c.clear();
    for (auto& [s, v] : c) v *= q;
    return *this;
}

Q Cochain::max_abs() const {
    Q m = 0;
    for (const auto& [s, v] : c) m = std::max(m, Q(abs(v)));
    return m;
}

Cochain coboundary(const Mesh& mesh, const Cochain& c) {
    Cochain out;
    out.k = c.k + 1;
    for (const auto& [s, v] : c.c) {
        std::set<int> extra;
        for (int cell : mesh.star(s))
            for (int x : mesh.cell(cell).verts)
                if (position(s, x) < 0) extra.insert(x);
        for (int x : extra) {
            Simplex t = simplex_union(s, Simplex{x});
            out.add(t, (position(t, x) & 1) ? Q(-v) : v);
        }
    }
    return out;
}

Form materialize_on_cell(const Mesh& mesh, const Cochain& c, int cell) {
    Form out(mesh.dim(), c.k);
    const auto& T = mesh.cell(cell).verts;
    for (const auto& [s, v] : c.c)
        if (is_face(s, T)) out += mesh.whitney(cell, s) * v;
    return out;
}

PiecewiseForm materialize(const MeshPtr& mesh, const Cochain& c) {
    PiecewiseForm out = PiecewiseForm::zero(mesh, c.k);
    for (int cell = 0; cell < mesh->num_cells(); ++cell) out.cells[cell] = materialize_on_cell(*mesh, c, cell);
    return out;
}

Q integrate(const Mesh& mesh, const Cochain& c) {
    if (!c.is_zero() && c.k != mesh.dim()) fail(Err::DegreeMismatch, "cochain is not of top degree");
    Q s = 0;
    for (int cell = 0; cell < mesh.num_cells(); ++cell)
        s += integrate_cell(mesh, materialize_on_cell(mesh, c, cell), cell);
    return s;
}

RefForm RefForm::zero(const Simplex& anchor, int k) {
    return RefForm{anchor, Form(static_cast<int>(anchor.size()), k)};
}

namespace {

void same_anchor(const RefForm& a, const RefForm& b) {
    if (a.anchor != b.anchor) fail(Err::MeshMismatch, "reference forms on different corner simplices");
}

}  // namespace

RefForm operator+(const RefForm& a, const RefForm& b) {
    same_anchor(a, b);
    return RefForm{a.anchor, a.form + b.form};
}

RefForm operator-(const RefForm& a, const RefForm& b) {
    same_anchor(a, b);
    return RefForm{a.anchor, a.form - b.form};
}

RefForm operator*(const RefForm& a, const Q& c) { return RefForm{a.anchor, a.form * c}; }

RefForm exterior_derivative(const RefForm& a) { return RefForm{a.anchor, exterior_derivative(a.form)}; }

RefForm restrict_anchor(const RefForm& a, const Simplex& face) {
    if (!is_face(face, a.anchor)) fail(Err::NotAFace, simplex_str(face) + " is not a face of " + simplex_str(a.anchor));
    if (a.degree() > static_cast<int>(face.size())) return RefForm::zero(face, a.degree());
    std::vector<Poly> map;
    for (int v : a.anchor) {
        int p = position(face, v);
        map.push_back(p < 0 ? Poly() : Poly::var(p));
    }
    return RefForm{face, pullback(a.form, map, static_cast<int>(face.size()))};
}

Poly corner_b(int nvars) {
    Poly b(Q(1));
    for (int i = 0; i < nvars; ++i) b -= Poly::var(i);
    return b;
}

namespace {

// Exact quotient by b = c - lambda_0 with c = 1 - sum_{i>=1} lambda_i.
Poly divide_poly_by_b(const Poly& p, int nvars) {
    if (nvars == 0 || p.is_zero()) return p;
    std::map<int, std::vector<Poly::Term>> parts;
    for (const auto& [key, coef] : p.terms()) {
        int a = mono::exp(key, 0);
        parts[a].emplace_back(key - static_cast<uint64_t>(a) * mono::unit(0), coef);
    }
    const int top = parts.rbegin()->first;
    auto part = [&](int a) {
        auto it = parts.find(a);
        return it == parts.end() ? Poly() : Poly::from_terms(it->second);
    };
    Poly c(Q(1));
    for (int i = 1; i < nvars; ++i) c -= Poly::var(i);
    if (top == 0) fail(Err::NotDivisible, "polynomial is not divisible by b");
    std::vector<Poly> q(top);
    q[top - 1] = -part(top);
    for (int a = top - 1; a >= 1; --a) q[a - 1] = c * q[a] - part(a);
    if (part(0) != c * q[0]) fail(Err::NotDivisible, "polynomial is not divisible by b");
    Poly out;
    for (int a = 0; a < top; ++a) out += q[a] * Poly::monomial(static_cast<uint64_t>(a) * mono::unit(0), 1);
    return out;
}

}  // namespace

RefForm divide_by_b(const RefForm& w, int j) {
    if (j < 0) fail(Err::InvalidArgument, "negative power of b");
    RefForm out = w;
    const int p = static_cast<int>(w.anchor.size());
    for (int i = 0; i < j; ++i) {
        Form next(p, out.form.degree());
        for (const auto& [mask, poly] : out.form.components()) next.add(mask, divide_poly_by_b(poly, p));
        out.form = std::move(next);
    }
    return out;
}

RefForm multiply_by_b(const RefForm& w, int j) {
    RefForm out = w;
    Poly b = corner_b(static_cast<int>(w.anchor.size()));
    for (int i = 0; i < j; ++i) out.form *= b;
    return out;
}

Form pullback_corner_on_cell(const Mesh& mesh, int cell, const Simplex& g, const RefForm& w) {
    if (!is_face(g, w.anchor)) fail(Err::NotAFace, simplex_str(g) + " is not a face of " + simplex_str(w.anchor));
    std::vector<Poly> map;
    for (int v : w.anchor) map.push_back(position(g, v) < 0 ? Poly() : mesh.hat(cell, v));
    return pullback(w.form, map, mesh.dim());
}

PiecewiseForm pullback_corner(const MeshPtr& mesh, const Simplex& g, const RefForm& w) {
    PiecewiseForm out = PiecewiseForm::zero(mesh, w.degree());
    for (int c = 0; c < mesh->num_cells(); ++c) out.cells[c] = pullback_corner_on_cell(*mesh, c, g, w);
    return out;
}

}  // namespace bubblex

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "form.hpp"
#include "mesh.hpp"

namespace bubblex {

// A k-form given on every cell by Cartesian polynomial coefficients.
struct PiecewiseForm {
    MeshPtr mesh;
    int k = 0;
    std::vector<Form> cells;

    static PiecewiseForm zero(MeshPtr mesh, int k);
    bool is_zero() const;
    int poly_degree() const;
    bool operator==(const PiecewiseForm& o) const;
    bool operator!=(const PiecewiseForm& o) const { return !(*this == o); }
    PiecewiseForm& operator+=(const PiecewiseForm& o);
    PiecewiseForm& operator-=(const PiecewiseForm& o);
    PiecewiseForm& operator*=(const Q& c);
    friend PiecewiseForm operator+(PiecewiseForm a, const PiecewiseForm& b) { return a += b; }
    friend PiecewiseForm operator-(PiecewiseForm a, const PiecewiseForm& b) { return a -= b; }
    friend PiecewiseForm operator*(PiecewiseForm a, const Q& c) { return a *= c; }
};

PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b);
PiecewiseForm exterior_derivative(const PiecewiseForm& a);
PiecewiseForm koszul(const PiecewiseForm& a);

PiecewiseForm whitney(const MeshPtr& mesh, const Simplex& f);
PiecewiseForm hat(const MeshPtr& mesh, int vertex);
PiecewiseForm rho(const MeshPtr& mesh, const Simplex& f);
// Global Cartesian polynomial form, identical on every cell.
PiecewiseForm global_form(const MeshPtr& mesh, const Form& f);

// Trace on a face seen from one cell, in the face parameters t_1..t_dim.
Form trace_on_cell(const Mesh& mesh, const Form& u, int cell, const Simplex& face);
// Trace on a face; throws Nonconforming if the cells containing it disagree.
Form trace(const PiecewiseForm& u, const Simplex& face);

struct Conformity {
    bool conforming = true;
    Simplex witness;
};
Conformity conformity_check(const PiecewiseForm& u);

// Integral of an n-form over the domain, or over one cell.
Q integrate(const PiecewiseForm& w);
Q integrate_cell(const Mesh& mesh, const Form& w, int cell);
Q l2_inner(const PiecewiseForm& u, const PiecewiseForm& v);

enum class Space { P, PMinus };
bool in_space(const Form& u, Space space, int r);
bool membership(const PiecewiseForm& u, Space space, int r);

// Whitney-basis coefficients of a trimmed linear form.
struct Cochain {
    int k = 0;
    std::map<Simplex, Q> c;

    void add(const Simplex& s, const Q& v);
    bool is_zero() const { return c.empty(); }
    bool operator==(const Cochain& o) const { return k == o.k && c == o.c; }
    Cochain& operator+=(const Cochain& o);
    Cochain& operator-=(const Cochain& o);
    Cochain& operator*=(const Q& q);
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
    friend Cochain operator*(Cochain a, const Q& q) { return a *= q; }
    Q max_abs() const;
};

// d on Whitney combinations is the mesh coboundary of the coefficients.
Cochain coboundary(const Mesh& mesh, const Cochain& c);
Form materialize_on_cell(const Mesh& mesh, const Cochain& c, int cell);
PiecewiseForm materialize(const MeshPtr& mesh, const Cochain& c);
// Integral over the domain of the top form; the cochain must have degree n.
Q integrate(const Mesh& mesh, const Cochain& c);

// A polynomial form on the corner simplex of `anchor`, variables ordered like the
// anchor vertices.
struct RefForm {
    Simplex anchor;
    Form form;

    static RefForm zero(const Simplex& anchor, int k);
    int degree() const { return form.degree(); }
    bool operator==(const RefForm& o) const { return anchor == o.anchor && form == o.form; }
};

RefForm operator+(const RefForm& a, const RefForm& b);
RefForm operator-(const RefForm& a, const RefForm& b);
RefForm operator*(const RefForm& a, const Q& c);
RefForm exterior_derivative(const RefForm& a);
// Restriction to the face of the corner simplex spanned by the vertices of `face`.
RefForm restrict_anchor(const RefForm& a, const Simplex& face);
// The distance to the origin b = 1 - sum lambda_i.
Poly corner_b(int nvars);
RefForm divide_by_b(const RefForm& w, int j);
RefForm multiply_by_b(const RefForm& w, int j);
// L_g^* for g a face of the anchor (zero extension on the remaining coordinates).
PiecewiseForm pullback_corner(const MeshPtr& mesh, const Simplex& g, const RefForm& w);
Form pullback_corner_on_cell(const Mesh& mesh, int cell, const Simplex& g, const RefForm& w);

}  // namespace bubblex

#include <doctest.h>

#include "errors.hpp"
#include "piecewise.hpp"
#include "random_forms.hpp"
#include "support.hpp"

using namespace bubblex;
using bxtest::fixture;
using bxtest::q;

namespace {

Form dx(int n, int v) { return Form::differential(n, v); }
Form scalar(int n, const Poly& p) { return Form::scalar(n, p); }
Poly x(int v) { return Poly::var(v); }

// Integral over [0,1] of a 1-form given in one parameter.
Q integrate_interval(const Form& w) {
    Q s = 0;
    for (const auto& [key, c] : w.component(1).terms()) s += c / Q(mono::exp(key, 0) + 1);
    return s;
}

}  // namespace

TEST_CASE("wedge basics") {
    Form w = wedge(dx(2, 0), dx(2, 1));
    CHECK(w.degree() == 2);
    CHECK(w.component(3) == Poly(Q(1)));
    CHECK(wedge(dx(2, 1), dx(2, 0)).component(3) == Poly(Q(-1)));

    Form u = scalar(3, x(0) + x(1) * x(2)) * Q(1);
    Form one = wedge(u, dx(3, 2)) + wedge(scalar(3, x(1)), dx(3, 0));
    CHECK(wedge(one, one).is_zero());

    // lambda_0 dlambda_1 ^ dlambda_0 = -lambda_0 dlambda_0 ^ dlambda_1
    Form lhs = wedge(wedge(scalar(2, x(0)), dx(2, 1)), dx(2, 0));
    Form rhs = wedge(wedge(scalar(2, x(0)), dx(2, 0)), dx(2, 1)) * Q(-1);
    CHECK(lhs == rhs);
}

TEST_CASE("exterior derivative") {
    CHECK(exterior_derivative(scalar(2, Poly(Q(5)))).is_zero());
    Form w = wedge(scalar(2, x(0)), dx(2, 1));
    CHECK(exterior_derivative(w) == wedge(dx(2, 0), dx(2, 1)));
    Form u = scalar(3, x(0) * x(0) * x(1) + x(2) * Q(3));
    CHECK(exterior_derivative(exterior_derivative(u)).is_zero());
}

TEST_CASE("Whitney forms on the diamond") {
    auto m = fixture("diamond2d");
    CHECK(whitney(m, {0}) == hat(m, 0));
    CHECK(rho(m, {}) == global_form(m, scalar(2, Poly(Q(1)))));

    // Edge integral of phi_[0,1] over its edge.
    PiecewiseForm phi = whitney(m, {0, 1});
    int c = m->star({0, 1})[0];
    CHECK(integrate_interval(trace_on_cell(*m, phi.cells[c], c, {0, 1})) == 1);

    // d phi_f is the sum of phi over the simplices <x,f>, signed by the position of x.
    PiecewiseForm expect = PiecewiseForm::zero(m, 2);
    for (int v = 0; v < m->num_vertices(); ++v) {
        Simplex t = simplex_union({0, 1}, {v});
        if (t.size() != 3 || !m->has(t)) continue;
        PiecewiseForm p = whitney(m, t);
        expect += (position(t, v) % 2) ? p * Q(-1) : p;
    }
    CHECK(exterior_derivative(phi) == expect);
}

TEST_CASE("Whitney forms span the trimmed linear space") {
    auto m = fixture("twotet3d");
    for (int d = 0; d <= 3; ++d)
        for (const auto& f : m->simplices(d)) {
            CHECK(membership(whitney(m, f), Space::PMinus, 1));
            CHECK(conformity_check(whitney(m, f)).conforming);
        }
}

TEST_CASE("traces and conformity") {
    auto m = fixture("diamond2d");
    CHECK(trace(hat(m, 0), {1, 2}).is_zero());

    PiecewiseForm u = PiecewiseForm::zero(m, 0);
    u.cells[m->cell_index({0, 1, 2})] = scalar(2, x(0));
    Conformity c = conformity_check(u);
    CHECK_FALSE(c.conforming);
    CHECK(c.witness == Simplex{0, 1});
    CHECK_THROWS_AS(trace(u, {0, 1}), Error);

    PiecewiseForm top = global_form(m, wedge(dx(2, 0), dx(2, 1)));
    CHECK(trace(top, {0, 1}).is_zero());
}

TEST_CASE("integration") {
    auto m = fixture("diamond2d");
    const int c = m->cell_index({0, 1, 2});
    Form vol = wedge(dx(2, 0), dx(2, 1));
    CHECK(integrate_cell(*m, vol, c) == q(1, 2));
    Form w = wedge(scalar(2, m->hat(c, 0) * m->hat(c, 1)), vol);
    CHECK(integrate_cell(*m, w, c) == q(1, 24));
}

TEST_CASE("L2 inner product") {
    auto m = fixture("diamond2d");
    PiecewiseForm d1 = global_form(m, dx(2, 0));
    CHECK(l2_inner(d1, d1) == 2);
    CHECK(l2_inner(d1, PiecewiseForm::zero(m, 1)) == 0);

    auto one = Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
    PiecewiseForm l0 = hat(one, 0);
    CHECK(l2_inner(l0, l0) == q(1, 12));

    PiecewiseForm u = random_form(m, 1, 2, false, 5);
    PiecewiseForm v = random_form(m, 1, 2, false, 6);
    CHECK(l2_inner(u, v) == l2_inner(v, u));
    CHECK(l2_inner(u, u) > 0);
}

TEST_CASE("polynomial class membership") {
    auto m = fixture("diamond2d");
    PiecewiseForm rot = global_form(m, wedge(scalar(2, x(0)), dx(2, 1)) - wedge(scalar(2, x(1)), dx(2, 0)));
    CHECK(membership(rot, Space::PMinus, 1));
    PiecewiseForm grad = global_form(m, wedge(scalar(2, x(0)), dx(2, 0)));
    CHECK(membership(grad, Space::P, 1));
    CHECK_FALSE(membership(grad, Space::PMinus, 1));
    CHECK_FALSE(membership(global_form(m, scalar(2, x(0) * x(1))), Space::P, 1));
    CHECK(koszul(grad) == global_form(m, scalar(2, x(0) * x(0))));
}

TEST_CASE("corner pullbacks") {
    auto m = fixture("diamond2d");
    const Simplex f{0, 1};
    // L_f^* b = rho_f
    RefForm b{f, Form::scalar(2, corner_b(2))};
    CHECK(pullback_corner(m, f, b) == rho(m, f));
    // Zero extension kills positive degree under the empty face and lambda_1 under [0].
    RefForm one{f, Form::differential(2, 0)};
    CHECK(pullback_corner(m, {}, one).is_zero());
    RefForm l1{f, Form::scalar(2, x(1))};
    CHECK(pullback_corner(m, {0}, l1).is_zero());
    RefForm l0{f, Form::scalar(2, x(0))};
    CHECK(pullback_corner(m, {0}, l0) == hat(m, 0));
}

TEST_CASE("division by powers of b") {
    const Simplex f{0, 1};
    Poly b = corner_b(2);
    RefForm w{f, Form::scalar(2, b * x(0))};
    CHECK(divide_by_b(w, 1) == RefForm{f, Form::scalar(2, x(0))});
    CHECK(divide_by_b(w, 0) == w);
    RefForm l0{f, Form::scalar(2, x(0))};
    try {
        divide_by_b(l0, 1);
        FAIL("expected NotDivisible");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotDivisible);
    }
    RefForm w2{f, wedge(Form::scalar(2, b * b * (x(1) + Poly(Q(3)))), Form::differential(2, 1))};
    CHECK(multiply_by_b(divide_by_b(w2, 2), 2) == w2);
}

TEST_CASE("random forms are conforming and in their class") {
    auto m = fixture("twotet3d");
    for (int k = 0; k <= 3; ++k)
        for (int r = 1; r <= 3; ++r) {
            PiecewiseForm u = random_form(m, k, r, false, 11 * k + r);
            CHECK(conformity_check(u).conforming);
            CHECK(membership(u, Space::P, r));
            PiecewiseForm t = random_form(m, k, r, true, 11 * k + r);
            CHECK(conformity_check(t).conforming);
            CHECK(membership(t, Space::PMinus, r));
        }
}

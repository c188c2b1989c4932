#include <doctest.h>

#include "errors.hpp"
#include "random_forms.hpp"
#include "support.hpp"
#include "transform.hpp"
#include "verify.hpp"

using namespace bubblex;
using bxtest::fixture;
using bxtest::hat_at;
using bxtest::q;

namespace {

const WeightSystem& weights_of(const std::string& name) {
    static std::map<std::string, WeightSystem> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, build_weight_system(fixture(name))).first;
    return it->second;
}

bool zero_outside(const Mesh& M, const PiecewiseForm& u, const std::vector<int>& allowed) {
    for (int c = 0; c < M.num_cells(); ++c)
        if (std::find(allowed.begin(), allowed.end(), c) == allowed.end() && !u.cells[c].is_zero()) return false;
    return true;
}

// The scalar lower-level operator for f in Delta_{m-1}, evaluated pointwise with its
// rational coefficients 1 / rho_g.
Q scalar_lower_k(const Reducer& ru, const Simplex& f, int cell, const std::vector<Q>& x) {
    const Mesh& M = *ru.weights().mesh;
    const Link& L = M.link(f);
    const Q nstar = static_cast<long>(L.of_dim(0).size());
    Q rho_f = 1;
    for (int v : f) rho_f -= hat_at(M, cell, v, x);
    Q total = 0;
    for (const auto& g : all_faces(f)) {
        Q rho_g = 1;
        for (int v : g) rho_g -= hat_at(M, cell, v, x);
        const Q sign = ((f.size() - g.size()) % 2) ? Q(-1) : Q(1);
        Q inner = 0;
        for (const auto& xi : L.of_dim(0)) {
            RefForm a = ru.average(simplex_union(xi, f));
            Form pulled = pullback_corner_on_cell(M, cell, g, a);
            inner += (hat_at(M, cell, xi[0], x) - rho_f / nstar) * pulled.component(0).eval(x);
        }
        total += sign * inner / rho_g;
    }
    return total;
}

}  // namespace

TEST_CASE("constant input") {
    const WeightSystem& ws = weights_of("diamond2d");
    Transform tr(ws);
    PiecewiseForm one = global_form(ws.mesh, Form::scalar(2, Poly(Q(1))));
    Decomposition D = tr.decompose(one);
    CHECK(D.W == one);
    for (const auto& [f, B] : D.bubbles) CHECK(B.is_zero());
    for (const auto& [key, K] : D.k_table)
        if (key.branch == KBranch::SameLevel) CHECK(K.is_zero());
    CHECK(D.residual_zero);

    StabilityRatios r = stability_ratios(tr, one);
    CHECK(r.bubbles == 0);
    CHECK(r.w == 1);

    Reducer ru(ws, one);
    RationalRng rng(2);
    std::vector<Q> x = random_interior_point(*ws.mesh, 1, rng);
    PointValue c0 = c_m_point_eval(ru, 0, x);
    CHECK(c0 == PointValue{{0u, Q(1)}});
}

TEST_CASE("scalar W is the hat-weighted average") {
    const WeightSystem& ws = weights_of("diamond2d");
    Transform tr(ws);
    PiecewiseForm u = random_form(ws.mesh, 0, 2, false, 12);
    PiecewiseForm expect = PiecewiseForm::zero(ws.mesh, 0);
    for (int v = 0; v < ws.mesh->num_vertices(); ++v)
        expect += hat(ws.mesh, v) * integrate(wedge(u, materialize(ws.mesh, ws.average({v}))));
    CHECK(tr.w_part(u) == expect);
    CHECK(exterior_derivative(tr.w_part(u)) == tr.w_part(exterior_derivative(u)));
}

TEST_CASE("scalar lower-level operators match their rational formula") {
    for (const char* name : {"diamond2d", "twotet3d"}) {
        const WeightSystem& ws = weights_of(name);
        const Mesh& M = *ws.mesh;
        Transform tr(ws);
        PiecewiseForm u = random_form(ws.mesh, 0, 2, false, 5);
        Decomposition D = tr.decompose(u);
        Reducer ru(ws, u);
        RationalRng rng(17);
        for (int m = 1; m <= M.dim() - 1; ++m)
            for (const auto& f : M.simplices(m - 1)) {
                const PiecewiseForm& K = D.k_table.at({m, KBranch::LowerLevel, f});
                CHECK(zero_outside(M, K, M.star(f)));
                for (int c : M.star(f))
                    for (int t = 0; t < 2; ++t) {
                        std::vector<Q> x = random_interior_point(M, c, rng);
                        INFO(name << " f=" << simplex_str(f) << " cell " << c);
                        CHECK(K.cells[c].component(0).eval(x) == scalar_lower_k(ru, f, c, x));
                    }
            }
    }
}

TEST_CASE("scalar same-level operators are alternating sums of pulled-back averages") {
    const WeightSystem& ws = weights_of("twotet3d");
    const Mesh& M = *ws.mesh;
    Transform tr(ws);
    PiecewiseForm u = random_form(ws.mesh, 0, 2, false, 6);
    Decomposition D = tr.decompose(u);
    Reducer ru(ws, u);
    for (int m = 0; m <= 2; ++m)
        for (const auto& f : M.simplices(m)) {
            PiecewiseForm expect = PiecewiseForm::zero(ws.mesh, 0);
            for (const auto& g : all_faces(f)) {
                PiecewiseForm p = pullback_corner(ws.mesh, g, ru.average(f));
                expect += ((f.size() - g.size()) % 2) ? p * Q(-1) : p;
            }
            CHECK(D.k_table.at({m, KBranch::SameLevel, f}) == expect);
            CHECK(zero_outside(M, expect, M.star(f)));
        }
}

TEST_CASE("local support of the edge operators") {
    {
        const WeightSystem& ws = weights_of("diamond2d");
        const Mesh& M = *ws.mesh;
        Decomposition D = Transform(ws).decompose(random_form(ws.mesh, 1, 2, false, 3));
        const PiecewiseForm& B = D.bubbles.at({0, 1});
        CHECK(B.cells[M.cell_index({0, 2, 3})].is_zero());
        CHECK(B.cells[M.cell_index({0, 3, 4})].is_zero());
        CHECK_FALSE(B.is_zero());
    }
    {
        const WeightSystem& ws = weights_of("twotet3d");
        const Mesh& M = *ws.mesh;
        Decomposition D = Transform(ws).decompose(random_form(ws.mesh, 1, 2, false, 3));
        for (const auto& f : M.simplices(1)) {
            CHECK(zero_outside(M, D.k_table.at({2, KBranch::LowerLevel, f}), M.star(f)));
            CHECK(zero_outside(M, D.bubbles.at(f), M.star(f)));
        }
    }
}

TEST_CASE("decomposition invariants across degrees and classes") {
    const WeightSystem& ws = weights_of("diamond2d");
    Transform tr(ws);
    for (int k = 0; k <= 2; ++k)
        for (int r = 1; r <= 3; ++r)
            for (bool trimmed : {false, true}) {
                PiecewiseForm u = random_form(ws.mesh, k, r, trimmed, 100 * k + 10 * r + trimmed);
                Decomposition D = tr.decompose(u);
                CheckList checks;
                check_decomposition(tr, u, D, true, checks);
                for (const auto& c : checks.checks()) {
                    INFO("k=" << k << " r=" << r << " trimmed=" << trimmed << " " << c.name << " " << c.witness);
                    CHECK(c.passed);
                }
                if (trimmed) CHECK(checks.find("bubble-in-P-minus") != nullptr);
                if (k < 2) CHECK(checks.find("commutation-W") != nullptr);
            }
}

TEST_CASE("pointwise oracle detects a corrupted operator") {
    const WeightSystem& ws = weights_of("diamond2d");
    Transform tr(ws);
    PiecewiseForm u = random_form(ws.mesh, 1, 2, false, 4);
    Decomposition D = tr.decompose(u);
    {
        CheckList ok;
        check_oracle(tr, D, 10, 1, ok);
        CHECK(ok.all_passed());
        CHECK(ok.find("oracle-telescope")->count == 10);
    }
    Decomposition bad = D;
    PiecewiseForm& K = bad.k_table.at({1, KBranch::LowerLevel, {0}});
    for (int c : ws.mesh->star({0})) K.cells[c] += Form::differential(2, 1) * q(1, 3);
    CheckList checks;
    check_oracle(tr, bad, 10, 1, checks);
    CHECK_FALSE(checks.find("oracle-telescope")->passed);
    CHECK(checks.find("oracle-C0")->passed);
}

TEST_CASE("nonconforming input is rejected") {
    const WeightSystem& ws = weights_of("diamond2d");
    PiecewiseForm u = PiecewiseForm::zero(ws.mesh, 0);
    u.cells[0] = Form::scalar(2, Poly::var(0));
    try {
        Transform(ws).decompose(u);
        FAIL("expected Nonconforming");
    } catch (const Error& e) {
        CHECK(e.code() == Err::Nonconforming);
    }
}

TEST_CASE("dependence on perturbations outside the macroelement") {
    const WeightSystem& ws = weights_of("diamond2d");
    Transform tr(ws);
    PiecewiseForm u = random_form(ws.mesh, 1, 2, false, 13);
    Decomposition D = tr.decompose(u);
    CheckList checks;
    check_dependence(tr, u, D, 5, checks);
    const CheckResult* c = checks.find("dependence");
    REQUIRE(c != nullptr);
    CHECK(c->passed);
    CHECK(c->count > 0);
}

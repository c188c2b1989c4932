#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "support.hpp"

using namespace bubblex;
using bxtest::fixture;
using bxtest::q;

namespace {

std::vector<int> cells_of(const Mesh& m, const std::vector<Simplex>& cells) {
    std::vector<int> out;
    for (const auto& c : cells) out.push_back(m.cell_index(c));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double diam(const Mesh& m, int c) {
    double best = 0;
    const auto& v = m.cell(c).verts;
    for (int a : v)
        for (int b : v) {
            double s = 0;
            for (int i = 0; i < m.dim(); ++i) {
                double d = to_double(m.coords(a)[i] - m.coords(b)[i]);
                s += d * d;
            }
            best = std::max(best, std::sqrt(s));
        }
    return best;
}

}  // namespace

TEST_CASE("diamond counts") {
    auto m = fixture("diamond2d");
    CHECK(m->dim() == 2);
    CHECK(m->simplices(0).size() == 5);
    CHECK(m->simplices(1).size() == 8);
    CHECK(m->simplices(2).size() == 4);
    CHECK(m->simplices(-1).size() == 1);
}

TEST_CASE("two tetrahedra counts and shared face") {
    auto m = fixture("twotet3d");
    CHECK(m->simplices(2).size() == 7);
    CHECK(m->star({1, 2, 3}).size() == 2);
    CHECK_FALSE(m->on_boundary({1, 2, 3}));
    CHECK(m->on_boundary({0, 1, 2}));
    const Link& L = m->link({1, 2, 3});
    CHECK(L.top == 0);
    CHECK(L.of_dim(0) == std::vector<Simplex>{{0}, {4}});
}

TEST_CASE("duplicate cell is rejected") {
    std::vector<std::vector<Q>> coords{{0, 0}, {1, 0}, {0, 1}};
    try {
        Mesh::build(coords, {{0, 1, 2}, {0, 1, 2}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotADecomposition);
    }
}

TEST_CASE("overlapping cells are rejected") {
    std::vector<std::vector<Q>> coords{{0, 0}, {2, 0}, {0, 2}, {q(1, 2), q(1, 2)}};
    CHECK_THROWS_AS(Mesh::build(coords, {{0, 1, 2}, {0, 1, 3}}), Error);
}

TEST_CASE("degenerate cell is rejected") {
    std::vector<std::vector<Q>> coords{{0, 0}, {1, 0}, {2, 0}};
    try {
        Mesh::build(coords, {{0, 1, 2}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Err::DegenerateCell);
    }
}

TEST_CASE("stars and extended stars on the diamond") {
    auto m = fixture("diamond2d");
    CHECK(m->star({0}).size() == 4);
    CHECK(m->star({0, 1}) == cells_of(*m, {{0, 1, 2}, {0, 1, 4}}));
    CHECK(sorted(m->extended_star({0, 1})) == std::vector<int>{0, 1, 2, 3});
    CHECK(m->star({}).size() == 4);
    CHECK(m->star({0, 1, 2}) == cells_of(*m, {{0, 1, 2}}));
}

TEST_CASE("links on the diamond") {
    auto m = fixture("diamond2d");
    const Link& L0 = m->link({0});
    CHECK(L0.top == 1);
    CHECK(L0.of_dim(1) == std::vector<Simplex>{{1, 2}, {1, 4}, {2, 3}, {3, 4}});
    CHECK(L0.of_dim(0).size() == 4);
    const Link& L01 = m->link({0, 1});
    CHECK(L01.top == 0);
    CHECK(L01.of_dim(0) == std::vector<Simplex>{{2}, {4}});
    CHECK(m->link({}).of_dim(2).size() == 4);
}

TEST_CASE("shape statistics") {
    SUBCASE("single cell: h_f is the cell diameter") {
        auto m = Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
        ShapeStats s = m->shape_stats();
        const double d = std::sqrt(2.0);
        for (const auto& [f, h] : s.h) CHECK(h == doctest::Approx(d));
        CHECK(s.overlap >= 1);
        CHECK(s.shape_constant > 1.0);
    }
    SUBCASE("diamond") {
        auto m = fixture("diamond2d");
        ShapeStats s = m->shape_stats();
        double mx = 0;
        for (int c = 0; c < m->num_cells(); ++c) mx = std::max(mx, diam(*m, c));
        CHECK(s.h.at({0, 1}) == doctest::Approx(mx));
        // T lies in the extended star of f exactly when f and T share a vertex.
        int expect = 0;
        for (int c = 0; c < m->num_cells(); ++c) {
            int cnt = 0;
            for (int d = 0; d <= 2; ++d)
                for (const auto& f : m->simplices(d))
                    for (int v : f)
                        if (position(m->cell(c).verts, v) >= 0) {
                            ++cnt;
                            break;
                        }
            expect = std::max(expect, cnt);
        }
        CHECK(expect == 14);
        CHECK(s.overlap == expect);
    }
}

TEST_CASE("orientations and volumes") {
    auto m = fixture("diamond2d");
    for (int c = 0; c < m->num_cells(); ++c) {
        CHECK(m->cell(c).volume == q(1, 2));
        CHECK(std::abs(m->cell(c).orientation) == 1);
    }
}

TEST_CASE("refined fixture is a valid mesh") {
    auto m = fixture("diamond2d_r1");
    CHECK(m->simplices(0).size() == 13);
    CHECK(m->simplices(2).size() == 16);
    CHECK(m->simplices(1).size() == 28);
}

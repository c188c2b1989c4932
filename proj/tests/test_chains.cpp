#include <doctest.h>

#include "chains.hpp"
#include "errors.hpp"
#include "random_forms.hpp"
#include "support.hpp"

using namespace bubblex;
using bxtest::fixture;
using bxtest::q;

namespace {

Q dot(const Chain& a, const Chain& b) {
    Q s = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it != b.end()) s += v * it->second;
    }
    return s;
}

Chain random_chain(const std::vector<Simplex>& support, RationalRng& rng) {
    Chain c;
    for (const auto& s : support) chain_add(c, s, rng.unit());
    return c;
}

// Sign of det[v_1 - v_0, ..., v_n - v_0] for the vertices taken in the given order.
int geometric_sign(const Mesh& m, const std::vector<int>& order) {
    const int n = m.dim();
    QMatrix a(n, std::vector<Q>(n));
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r) a[r][i] = m.coords(order[i + 1])[r] - m.coords(order[0])[r];
    Q det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && sgn(a[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            Q f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return sgn(det);
}

std::vector<Pair> all_pairs(const Mesh& m) {
    std::vector<Pair> out;
    for (int d = -1; d <= m.dim(); ++d)
        for (const auto& f : m.simplices(d)) {
            out.push_back({Simplex{}, f});
            if (d == m.dim()) continue;
            for (int j = 0; j <= m.dim() - d - 1; ++j)
                for (const auto& e : d < 0 ? m.simplices(j) : m.link(f).of_dim(j)) out.push_back({e, f});
        }
    return out;
}

PairFamily<Q> apply_delta(const PairFamily<Q>& w, const std::vector<Pair>& pairs, bool plus) {
    PairFamily<Q> out;
    for (const auto& [e, f] : pairs) {
        Q v = plus ? pair_delta_plus(w, e, f, Q(0)) : pair_delta(w, e, f, Q(0));
        if (sgn(v) != 0) out[{e, f}] = v;
    }
    return out;
}

// o(T) times (-1)^{sigma_{T_i}(x_{j_i})}, where T_i drops the first i vertices of f from T.
int induced_sign(const Mesh& m, const Simplex& e, const Simplex& f) {
    std::vector<int> rest = simplex_union(e, f);
    int s = geometric_sign(m, rest);
    for (int v : f) {
        auto it = std::find(rest.begin(), rest.end(), v);
        if ((it - rest.begin()) % 2) s = -s;
        rest.erase(it);
    }
    return s;
}

}  // namespace

TEST_CASE("boundary of a boundary vanishes") {
    auto m = fixture("twotet3d");
    RationalRng rng(3);
    Chain c = random_chain(m->simplices(3), rng);
    CHECK(boundary(boundary(c)).empty());
    Chain e = random_chain(m->simplices(1), rng);
    CHECK(boundary(boundary(e)).empty());
    CHECK(boundary(Chain{}).empty());
}

TEST_CASE("link coboundary") {
    auto m = fixture("diamond2d");
    const Link& L = m->link({0});
    Carrier car = Carrier::of_link(L);
    Chain ones;
    for (const auto& v : L.of_dim(0)) chain_add(ones, v, 1);
    CHECK(coboundary(car, ones, 0).empty());

    RationalRng rng(9);
    for (int t = 0; t < 5; ++t) {
        Chain c = random_chain(L.of_dim(1), rng);
        Chain d = random_chain(L.of_dim(0), rng);
        CHECK(dot(boundary(c), d) == dot(c, coboundary(car, d, 0)));
    }
}

TEST_CASE("closing arrow on a two-point link") {
    auto m = fixture("diamond2d");
    const Link& L = m->link({0, 1});
    const int o2 = induced_sign(*m, {2}, {0, 1});
    const int o4 = induced_sign(*m, {4}, {0, 1});
    CHECK(o2 == -o4);
    CHECK(L.top_sign.at({2}) == o2);
    CHECK(L.top_sign.at({4}) == o4);
    Chain c{{{2}, Q(1)}, {{4}, Q(1)}};
    CHECK(top_coboundary(L, c) == Q(o2 + o4));
}

TEST_CASE("closing arrow orientation agrees with the induced orientation everywhere") {
    for (const char* name : {"diamond2d", "twotet3d"}) {
        auto m = fixture(name);
        for (int d = 0; d < m->dim(); ++d)
            for (const auto& f : m->simplices(d)) {
                const Link& L = m->link(f);
                for (const auto& [e, s] : L.top_sign) CHECK(s == induced_sign(*m, e, f));
            }
    }
}

TEST_CASE("pair coboundaries") {
    auto m = fixture("diamond2d");
    auto pairs = all_pairs(*m);
    RationalRng rng(21);
    for (int t = 0; t < 3; ++t) {
        PairFamily<Q> w;
        for (const auto& p : pairs) w[p] = rng.unit();
        CHECK(apply_delta(apply_delta(w, pairs, true), pairs, true).empty());
        CHECK(apply_delta(apply_delta(w, pairs, false), pairs, false).empty());
        PairFamily<Q> a = apply_delta(apply_delta(w, pairs, false), pairs, true);
        PairFamily<Q> b = apply_delta(apply_delta(w, pairs, true), pairs, false);
        for (const auto& [k, v] : b) a[k] += v;
        for (const auto& [k, v] : a) CHECK(sgn(v) == 0);
    }
    PairFamily<Q> single{{{Simplex{1}, Simplex{0, 2}}, Q(1)}};
    int nonzero = 0;
    for (const auto& p : pairs) {
        Q v = pair_delta_plus(single, p.first, p.second, Q(0));
        if (sgn(v) != 0) ++nonzero;
    }
    CHECK(nonzero <= 2);
    CHECK(nonzero >= 1);
}

TEST_CASE("potential on the four-cycle link") {
    auto m = fixture("diamond2d");
    const Link& L = m->link({0});
    Chain c{{{1}, Q(1)}, {{2}, Q(-1)}};
    PotentialResult r = solve_potential(L, 0, {c});
    REQUIRE(r.columns.size() == 1);
    CHECK(boundary(r.columns[0]) == c);
    CHECK(top_coboundary(L, r.columns[0]) == 0);
    CHECK(r.branch == PotentialBranch::Gauge);

    CHECK(solve_potential(L, 0, {Chain{}}).columns[0].empty());
    try {
        solve_potential(L, 0, {Chain{{{1}, Q(1)}}});
        FAIL("expected NotClosed");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotClosed);
    }
}

TEST_CASE("trimmed local solve on the shared face") {
    auto m = fixture("twotet3d");
    const Simplex f{1, 2, 3};
    Chain c{{f, q(5, 3)}};
    Chain target = coboundary(Carrier::whole(*m), c, 2);
    CHECK(solve_trimmed_local(*m, f, 2, target) == c);
    CHECK(solve_trimmed_local(*m, f, 2, Chain{}).empty());

    Chain bad = target;
    bad.begin()->second += 1;
    try {
        solve_trimmed_local(*m, f, 2, bad);
        FAIL("expected Incompatible");
    } catch (const Error& e) {
        CHECK(e.code() == Err::Incompatible);
    }
}

TEST_CASE("mesh coboundary of Whitney coefficients matches d") {
    auto m = fixture("twotet3d");
    RationalRng rng(4);
    for (int k = 0; k < 3; ++k) {
        Cochain c;
        c.k = k;
        for (const auto& s : m->simplices(k)) c.add(s, rng.unit());
        CHECK(exterior_derivative(materialize(m, c)) == materialize(m, coboundary(*m, c)));
    }
}

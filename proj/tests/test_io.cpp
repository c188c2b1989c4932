#include <doctest.h>

#include "errors.hpp"
#include "random_forms.hpp"
#include "support.hpp"

using namespace bubblex;
using bxtest::fixture;
using nlohmann::json;

TEST_CASE("rational strings are canonical") {
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-10/5")) == "-2");
    CHECK(to_string(parse_rational("+7")) == "7");
    CHECK(to_string(ratio(4, -6)) == "-2/3");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("1/-2"), Error);
    CHECK_THROWS_AS(parse_rational("0.5"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("mesh round trip") {
    for (const char* name : {"diamond2d", "twotet3d", "diamond2d_r1"}) {
        auto m = fixture(name);
        auto back = mesh_from_json(json::parse(mesh_to_json(*m).dump()));
        CHECK(back->hash() == m->hash());
        CHECK(back->num_cells() == m->num_cells());
        for (int v = 0; v < m->num_vertices(); ++v) CHECK(back->coords(v) == m->coords(v));
    }
}

TEST_CASE("form round trip") {
    auto m = fixture("twotet3d");
    for (int k = 0; k <= 3; ++k) {
        PiecewiseForm u = random_form(m, k, 2, false, 900 + k);
        std::string text = form_to_json(u).dump();
        PiecewiseForm back = form_from_json(m, json::parse(text));
        CHECK(back == u);
        CHECK(form_to_json(back).dump() == text);
    }
}

TEST_CASE("form files reject malformed content") {
    auto m = fixture("diamond2d");
    PiecewiseForm u = random_form(m, 1, 1, false, 1);
    json j = form_to_json(u);
    json bad_cell = j;
    bad_cell["cells"]["0,1,3"] = json::object();
    CHECK_THROWS_AS(form_from_json(m, bad_cell), Error);
    json bad_k = j;
    bad_k["k"] = 5;
    CHECK_THROWS_AS(form_from_json(m, bad_k), Error);
}

TEST_CASE("malformed meshes") {
    CHECK_THROWS_AS(mesh_from_json(json::parse(R"({"dim":2,"vertices":[["0","0"],["1","0"]],"cells":[[0,1,2]]})")), Error);
    CHECK_THROWS_AS(mesh_from_json(json::parse(R"({"dim":2,"vertices":[["0","0","0"]],"cells":[]})")), Error);
    CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.json"), Error);
    try {
        mesh_from_json(json::parse(R"({"dim":2,"vertices":[["0","0"],["1","0"],["0","1"]],"cells":[[0,1,2],[0,1,2]]})"));
        FAIL("expected NotADecomposition");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotADecomposition);
    }
}

TEST_CASE("weight files are deterministic and hashed") {
    auto m = fixture("diamond2d");
    WeightSystem a = build_weight_system(m);
    WeightSystem b = build_weight_system(m);
    CHECK(weights_to_json(a).dump() == weights_to_json(b).dump());
    CHECK(weights_hash(a) == weights_hash(b));
    json j = weights_to_json(a);
    CHECK(j.at("mesh_hash") == m->hash());
    CHECK(j.at("hash") == weights_hash(a));
}

TEST_CASE("random generation is reproducible") {
    auto m = fixture("diamond2d");
    CHECK(form_to_json(random_form(m, 1, 2, true, 42)).dump() == form_to_json(random_form(m, 1, 2, true, 42)).dump());
    CHECK(random_form(m, 1, 2, false, 42) != random_form(m, 1, 2, false, 43));
    PiecewiseForm lin = random_form(m, 0, 1, false, 7);
    CHECK(membership(lin, Space::P, 1));
    CHECK(conformity_check(lin).conforming);
}

TEST_CASE("simplex keys") {
    CHECK(simplex_key({0, 3, 7}) == "0,3,7");
    CHECK(parse_simplex_key("0,3,7") == Simplex{0, 3, 7});
    CHECK(parse_simplex_key("").empty());
}

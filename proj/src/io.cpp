#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace bubblex {

using nlohmann::json;

namespace {

Q rational_field(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Q(v.get<long>());
    fail(Err::Parse, "expected a rational string, got " + v.dump());
}

uint64_t parse_exponents(const std::string& s, int nvars) {
    uint64_t key = 0;
    std::stringstream ss(s);
    std::string item;
    int v = 0;
    while (std::getline(ss, item, ',')) {
        if (v >= nvars) fail(Err::Parse, "too many exponents in '" + s + "'");
        int e = 0;
        try {
            e = std::stoi(item);
        } catch (const std::exception&) {
            fail(Err::Parse, "bad exponent in '" + s + "'");
        }
        if (e < 0 || e > 255) fail(Err::Parse, "exponent out of range in '" + s + "'");
        key |= static_cast<uint64_t>(e) << (8 * v);
        ++v;
    }
    if (v != nvars) fail(Err::Parse, "expected " + std::to_string(nvars) + " exponents in '" + s + "'");
    return key;
}

std::string exponents_str(uint64_t key, int nvars) {
    std::string s;
    for (int v = 0; v < nvars; ++v) {
        if (v) s += ',';
        s += std::to_string(mono::exp(key, v));
    }
    return s;
}

std::string fnv(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json chain_json(const std::map<Simplex, Q>& c) {
    json o = json::object();
    for (const auto& [s, v] : c) o[simplex_key(s)] = to_string(v);
    return o;
}

}  // namespace

std::string simplex_key(const Simplex& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out;
}

Simplex parse_simplex_key(const std::string& s) {
    Simplex out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            fail(Err::Parse, "bad simplex key '" + s + "'");
        }
    }
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) fail(Err::Parse, "simplex key '" + s + "' is not strictly increasing");
    return out;
}

MeshPtr mesh_from_json(const json& j) {
    try {
        int dim = j.at("dim").get<int>();
        std::vector<std::vector<Q>> coords;
        for (const auto& v : j.at("vertices")) {
            std::vector<Q> x;
            for (const auto& c : v) x.push_back(rational_field(c));
            if (static_cast<int>(x.size()) != dim)
                fail(Err::InconsistentDim, "vertex with " + std::to_string(x.size()) + " coordinates in dimension " +
                                               std::to_string(dim));
            coords.push_back(std::move(x));
        }
        std::vector<std::vector<int>> cells = j.at("cells").get<std::vector<std::vector<int>>>();
        if (coords.empty()) fail(Err::InconsistentDim, "mesh has no vertices");
        return Mesh::build(std::move(coords), std::move(cells));
    } catch (const json::exception& e) {
        fail(Err::Parse, std::string("malformed mesh document: ") + e.what());
    }
}

json mesh_to_json(const Mesh& mesh) {
    json j;
    j["dim"] = mesh.dim();
    json verts = json::array();
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        json x = json::array();
        for (const auto& q : mesh.coords(v)) x.push_back(to_string(q));
        verts.push_back(x);
    }
    j["vertices"] = verts;
    json cells = json::array();
    for (int c = 0; c < mesh.num_cells(); ++c) cells.push_back(mesh.cell(c).verts);
    j["cells"] = cells;
    return j;
}

PiecewiseForm form_from_json(const MeshPtr& mesh, const json& j) {
    try {
        const int n = mesh->dim();
        int k = j.at("k").get<int>();
        if (k < 0 || k > n) fail(Err::DegreeMismatch, "form degree " + std::to_string(k) + " outside 0.." + std::to_string(n));
        if (j.contains("n") && j.at("n").get<int>() != n) fail(Err::MeshMismatch, "form dimension differs from mesh");
        PiecewiseForm u = PiecewiseForm::zero(mesh, k);
        for (const auto& [key, comps] : j.at("cells").items()) {
            Simplex s = parse_simplex_key(key);
            int c = mesh->cell_index(s);
            if (c < 0) fail(Err::UnknownSimplex, "form cell " + key + " is not a mesh cell");
            Form f(n, k);
            for (const auto& [mkey, terms] : comps.items()) {
                uint32_t mask = 0;
                try {
                    mask = static_cast<uint32_t>(std::stoul(mkey));
                } catch (const std::exception&) {
                    fail(Err::Parse, "bad differential mask '" + mkey + "'");
                }
                if (mask >= (1u << n) || popcount(mask) != k)
                    fail(Err::DegreeMismatch, "mask " + mkey + " is not a " + std::to_string(k) + "-form basis element");
                std::vector<Poly::Term> t;
                for (const auto& [ekey, val] : terms.items()) t.emplace_back(parse_exponents(ekey, n), rational_field(val));
                f.add(mask, Poly::from_terms(std::move(t)));
            }
            u.cells[c] = std::move(f);
        }
        return u;
    } catch (const json::exception& e) {
        fail(Err::Parse, std::string("malformed form document: ") + e.what());
    }
}

json form_to_json(const PiecewiseForm& u) {
    const int n = u.mesh->dim();
    json j;
    j["k"] = u.k;
    j["n"] = n;
    j["degree"] = std::max(0, u.poly_degree());
    json cells = json::object();
    for (int c = 0; c < u.mesh->num_cells(); ++c) {
        json comps = json::object();
        for (const auto& [mask, p] : u.cells[c].components()) {
            json terms = json::object();
            for (const auto& [key, q] : p.terms()) terms[exponents_str(key, n)] = to_string(q);
            comps[std::to_string(mask)] = terms;
        }
        cells[simplex_key(u.mesh->cell(c).verts)] = comps;
    }
    j["cells"] = cells;
    return j;
}

json weights_to_json(const WeightSystem& ws) {
    json j;
    j["mesh_hash"] = ws.mesh->hash();
    json links = json::array();
    for (const auto& [f, lf] : ws.links) {
        json l;
        l["f"] = simplex_key(f);
        l["top"] = lf.top;
        json a = json::array(), b = json::array();
        for (const auto& level : lf.a) {
            json m = json::object();
            for (const auto& [e, c] : level) m[simplex_key(e)] = chain_json(c);
            a.push_back(m);
        }
        for (const auto& level : lf.b) {
            json m = json::object();
            for (const auto& [e, c] : level) m[simplex_key(e)] = chain_json(c);
            b.push_back(m);
        }
        l["a"] = a;
        l["b"] = b;
        links.push_back(l);
    }
    j["links"] = links;
    auto family = [](const PairFamily<Cochain>& fam) {
        json arr = json::array();
        for (const auto& [pr, c] : fam) {
            json o;
            o["e"] = simplex_key(pr.first);
            o["f"] = simplex_key(pr.second);
            o["degree"] = c.k;
            o["coefficients"] = chain_json(c.c);
            arr.push_back(o);
        }
        return arr;
    };
    j["w"] = family(ws.w);
    j["z"] = family(ws.z);
    json avg = json::object();
    for (const auto& [f, c] : ws.zavg) avg[simplex_key(f)] = chain_json(c.c);
    j["z_average"] = avg;
    json body = j;
    j["hash"] = fnv(body.dump());
    return j;
}

std::string weights_hash(const WeightSystem& ws) { return weights_to_json(ws).at("hash").get<std::string>(); }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::Io, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(Err::Parse, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(Err::Io, "cannot write " + path);
    out << text;
    if (!out) fail(Err::Io, "write failed for " + path);
}

MeshPtr load_mesh(const std::string& path) { return mesh_from_json(read_json_file(path)); }

PiecewiseForm load_form(const MeshPtr& mesh, const std::string& path) { return form_from_json(mesh, read_json_file(path)); }

}  // namespace bubblex

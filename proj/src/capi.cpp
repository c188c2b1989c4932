#include "bubblex/bubblex.h"

#include <chrono>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "random_forms.hpp"
#include "transform.hpp"
#include "verify.hpp"

using nlohmann::json;
using namespace bubblex;

struct bx_mesh {
    MeshPtr mesh;
};
struct bx_weights {
    WeightSystem ws;
};
struct bx_form {
    PiecewiseForm u;
};
struct bx_report {
    std::string text;
    bool passed = true;
};
struct bx_decomposition {
    Decomposition d;
    std::vector<Simplex> keys;
};

namespace {

thread_local std::string last_error;

int code_of(Err e) { return -static_cast<int>(e); }

int set_error(int code, const std::string& msg) {
    last_error = msg;
    return code;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const Error& e) {
        return set_error(code_of(e.code()), e.what());
    } catch (const json::exception& e) {
        return set_error(BX_ERR_PARSE, std::string("ParseError: ") + e.what());
    } catch (const std::bad_alloc&) {
        return set_error(BX_ERR_INTERNAL, "InternalError: out of memory");
    } catch (const std::exception& e) {
        return set_error(BX_ERR_INTERNAL, std::string("InternalError: ") + e.what());
    }
}

#define BX_REQUIRE(p)                                                          \
    do {                                                                       \
        if (!(p)) return set_error(BX_ERR_NULL_ARGUMENT, "null argument: " #p); \
    } while (0)

int emit(const std::string& text, char* buf, size_t cap, size_t* needed) {
    const size_t need = text.size() + 1;
    if (needed) *needed = need;
    if (cap < need) return set_error(BX_ERR_INSUFFICIENT_BUFFER, "buffer too small");
    std::memcpy(buf, text.c_str(), need);
    return BX_OK;
}

json checks_json(const std::vector<CheckResult>& checks) {
    json a = json::array();
    for (const auto& c : checks)
        a.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}, {"instances", c.count}});
    return a;
}

json point_json(const std::vector<Q>& x) {
    json a = json::array();
    for (const auto& q : x) a.push_back(to_string(q));
    return a;
}

json value_json(const PointValue& v) {
    json o = json::object();
    for (const auto& [mask, q] : v) o[std::to_string(mask)] = to_string(q);
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

extern "C" {

const char* bx_error_name(int code) {
    switch (code) {
        case BX_OK: return "Ok";
        case BX_ERR_INSUFFICIENT_BUFFER: return "InsufficientBuffer";
        case BX_ERR_NULL_ARGUMENT: return "NullArgument";
        default: break;
    }
    if (code <= code_of(Err::Parse) && code >= code_of(Err::Internal)) return err_name(static_cast<Err>(-code));
    return "Unknown";
}

const char* bx_last_error_message(void) { return last_error.c_str(); }

int bx_set_jobs(int jobs) {
    if (jobs < 0) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: negative job count");
    set_jobs(jobs);
    return BX_OK;
}

int bx_mesh_load(const char* path, bx_mesh** out) {
    BX_REQUIRE(path);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_mesh{load_mesh(path)};
        return BX_OK;
    });
}

int bx_mesh_from_json(const char* text, bx_mesh** out) {
    BX_REQUIRE(text);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_mesh{mesh_from_json(json::parse(text))};
        return BX_OK;
    });
}

void bx_mesh_free(bx_mesh* mesh) { delete mesh; }

int bx_mesh_dim(const bx_mesh* mesh, int* out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(out);
    *out = mesh->mesh->dim();
    return BX_OK;
}

int bx_mesh_count(const bx_mesh* mesh, int d, int* out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(out);
    if (d < -1 || d > mesh->mesh->dim()) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: dimension out of range");
    *out = static_cast<int>(mesh->mesh->simplices(d).size());
    return BX_OK;
}

int bx_mesh_info_json(const bx_mesh* mesh, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(mesh);
    return guarded([&] {
        const Mesh& M = *mesh->mesh;
        const int n = M.dim();
        json j;
        j["dim"] = n;
        j["hash"] = M.hash();
        json counts = json::array();
        for (int d = 0; d <= n; ++d) counts.push_back(M.simplices(d).size());
        j["counts"] = counts;
        json cells = json::array();
        for (int c = 0; c < M.num_cells(); ++c)
            cells.push_back({{"cell", simplex_key(M.cell(c).verts)},
                             {"orientation", M.cell(c).orientation},
                             {"volume", to_string(M.cell(c).volume)}});
        j["cells"] = cells;
        json links = json::array();
        for (int d = 0; d <= n - 1; ++d)
            for (const auto& f : M.simplices(d)) {
                const Link& L = M.link(f);
                links.push_back({{"f", simplex_key(f)},
                                 {"star_cells", M.star(f).size()},
                                 {"link_dim", L.top},
                                 {"link_vertices", L.num_vertices()},
                                 {"boundary", M.on_boundary(f)}});
            }
        j["links"] = links;
        json shared = json::array();
        for (const auto& s : M.simplices(n - 1))
            if (M.star(s).size() == 2) shared.push_back(simplex_key(s));
        j["shared_faces"] = shared;
        j["boundary_facets"] = M.boundary_facets().size();
        ShapeStats st = M.shape_stats();
        double hmin = 0, hmax = 0;
        bool first = true;
        for (const auto& [f, h] : st.h) {
            hmin = first ? h : std::min(hmin, h);
            hmax = first ? h : std::max(hmax, h);
            first = false;
        }
        j["shape"] = {{"c_T", st.shape_constant}, {"h_min", hmin}, {"h_max", hmax}, {"overlap", st.overlap}};
        return emit(j.dump(2), buf, cap, needed);
    });
}

int bx_weights_build(const bx_mesh* mesh, bx_weights** out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_weights{build_weight_system(mesh->mesh)};
        return BX_OK;
    });
}

void bx_weights_free(bx_weights* ws) { delete ws; }

int bx_weights_to_json(const bx_weights* ws, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(ws);
    return guarded([&] { return emit(weights_to_json(ws->ws).dump(), buf, cap, needed); });
}

int bx_weights_certify(const bx_weights* ws, bx_report** out) {
    BX_REQUIRE(ws);
    BX_REQUIRE(out);
    return guarded([&] {
        auto t0 = std::chrono::steady_clock::now();
        CertificateReport rep = certify_weight_system(ws->ws);
        json j;
        j["command"] = "certify";
        j["mesh_hash"] = ws->ws.mesh->hash();
        j["weights_hash"] = weights_hash(ws->ws);
        j["checks"] = checks_json(rep.checks);
        j["notes"] = rep.notes;
        j["max_w"] = rep.max_w;
        j["max_z"] = rep.max_z;
        j["all_passed"] = rep.all_passed();
        j["timings"] = {{"certify_seconds", seconds_since(t0)}};
        *out = new bx_report{j.dump(2), rep.all_passed()};
        return BX_OK;
    });
}

int bx_form_load(const bx_mesh* mesh, const char* path, bx_form** out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(path);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_form{load_form(mesh->mesh, path)};
        return BX_OK;
    });
}

int bx_form_from_json(const bx_mesh* mesh, const char* text, bx_form** out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(text);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_form{form_from_json(mesh->mesh, json::parse(text))};
        return BX_OK;
    });
}

int bx_form_random(const bx_mesh* mesh, int k, int degree, int trimmed, uint64_t seed, bx_form** out) {
    BX_REQUIRE(mesh);
    BX_REQUIRE(out);
    return guarded([&] {
        const int n = mesh->mesh->dim();
        if (k < 0 || k > n) fail(Err::InvalidArgument, "form degree must lie in [0, " + std::to_string(n) + "]");
        if (degree < 1) fail(Err::InvalidArgument, "polynomial degree must be at least 1");
        PiecewiseForm u = random_form(mesh->mesh, k, degree, trimmed != 0, seed);
        const Space sp = trimmed ? Space::PMinus : Space::P;
        if (!membership(u, sp, degree)) fail(Err::Internal, "generated form failed its membership check");
        if (!conformity_check(u).conforming) fail(Err::Internal, "generated form is not conforming");
        *out = new bx_form{std::move(u)};
        return BX_OK;
    });
}

void bx_form_free(bx_form* form) { delete form; }

int bx_form_degree(const bx_form* form, int* k) {
    BX_REQUIRE(form);
    BX_REQUIRE(k);
    *k = form->u.k;
    return BX_OK;
}

int bx_form_is_conforming(const bx_form* form, int* out) {
    BX_REQUIRE(form);
    BX_REQUIRE(out);
    return guarded([&] {
        Conformity c = conformity_check(form->u);
        *out = c.conforming ? 1 : 0;
        if (!c.conforming) last_error = "nonconforming across " + simplex_str(c.witness);
        return BX_OK;
    });
}

int bx_form_membership(const bx_form* form, int space, int r, int* out) {
    BX_REQUIRE(form);
    BX_REQUIRE(out);
    if (space != BX_SPACE_P && space != BX_SPACE_P_MINUS)
        return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: unknown space");
    return guarded([&] {
        *out = membership(form->u, space == BX_SPACE_P ? Space::P : Space::PMinus, r) ? 1 : 0;
        return BX_OK;
    });
}

int bx_form_equal(const bx_form* a, const bx_form* b, int* out) {
    BX_REQUIRE(a);
    BX_REQUIRE(b);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = (a->u.mesh == b->u.mesh && a->u == b->u) ? 1 : 0;
        return BX_OK;
    });
}

int bx_form_to_json(const bx_form* form, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(form);
    return guarded([&] { return emit(form_to_json(form->u).dump(), buf, cap, needed); });
}

void bx_report_free(bx_report* report) { delete report; }

int bx_report_passed(const bx_report* report, int* passed) {
    BX_REQUIRE(report);
    BX_REQUIRE(passed);
    *passed = report->passed ? 1 : 0;
    return BX_OK;
}

int bx_report_json(const bx_report* report, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(report);
    return emit(report->text, buf, cap, needed);
}

int bx_decompose(const bx_weights* ws, const bx_form* form, bx_decomposition** out) {
    BX_REQUIRE(ws);
    BX_REQUIRE(form);
    BX_REQUIRE(out);
    return guarded([&] {
        Transform tr(ws->ws);
        auto* d = new bx_decomposition{tr.decompose(form->u), {}};
        const Mesh& M = *ws->ws.mesh;
        for (int dim = 0; dim <= M.dim(); ++dim)
            for (const auto& f : M.simplices(dim))
                if (d->d.bubbles.count(f)) d->keys.push_back(f);
        *out = d;
        return BX_OK;
    });
}

void bx_decomposition_free(bx_decomposition* d) { delete d; }

int bx_decomposition_flags(const bx_decomposition* d, int* residual_zero, int* trace_zero) {
    BX_REQUIRE(d);
    if (residual_zero) *residual_zero = d->d.residual_zero ? 1 : 0;
    if (trace_zero) *trace_zero = d->d.trace_zero ? 1 : 0;
    return BX_OK;
}

int bx_decomposition_w(const bx_decomposition* d, bx_form** out) {
    BX_REQUIRE(d);
    BX_REQUIRE(out);
    return guarded([&] {
        *out = new bx_form{d->d.W};
        return BX_OK;
    });
}

int bx_decomposition_num_bubbles(const bx_decomposition* d, size_t* out) {
    BX_REQUIRE(d);
    BX_REQUIRE(out);
    *out = d->keys.size();
    return BX_OK;
}

int bx_decomposition_bubble_key(const bx_decomposition* d, size_t i, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(d);
    if (i >= d->keys.size()) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: bubble index out of range");
    return emit(simplex_key(d->keys[i]), buf, cap, needed);
}

int bx_decomposition_bubble(const bx_decomposition* d, size_t i, bx_form** out) {
    BX_REQUIRE(d);
    BX_REQUIRE(out);
    if (i >= d->keys.size()) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: bubble index out of range");
    return guarded([&] {
        *out = new bx_form{d->d.bubbles.at(d->keys[i])};
        return BX_OK;
    });
}

int bx_decomposition_manifest_json(const bx_decomposition* d, char* buf, size_t cap, size_t* needed) {
    BX_REQUIRE(d);
    return guarded([&] {
        json j;
        j["k"] = d->d.u.k;
        j["mesh_hash"] = d->d.u.mesh->hash();
        j["residual_zero"] = d->d.residual_zero;
        j["trace_zero"] = d->d.trace_zero;
        if (!d->d.trace_zero) j["trace_witness"] = simplex_key(d->d.trace_witness);
        j["W"] = "W.form";
        json b = json::array();
        for (const auto& f : d->keys)
            b.push_back({{"simplex", simplex_key(f)}, {"file", "B_" + simplex_key(f) + ".form"}});
        j["bubbles"] = b;
        return emit(j.dump(2), buf, cap, needed);
    });
}

int bx_verify(const bx_weights* ws, const bx_form* form, int full, int points, uint64_t seed, bx_report** out) {
    BX_REQUIRE(ws);
    BX_REQUIRE(form);
    BX_REQUIRE(out);
    if (points < 1) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: at least one oracle point is needed");
    return guarded([&] {
        auto t0 = std::chrono::steady_clock::now();
        VerifyOptions opt;
        opt.full = full != 0;
        opt.points = points;
        opt.seed = seed;
        VerifyResult res = verify_form(ws->ws, form->u, opt);
        json j;
        j["command"] = "verify";
        j["level"] = opt.full ? "full" : "quick";
        j["seed"] = seed;
        j["k"] = form->u.k;
        j["mesh_hash"] = ws->ws.mesh->hash();
        j["weights_hash"] = weights_hash(ws->ws);
        j["checks"] = checks_json(res.checks.checks());
        j["notes"] = res.notes;
        j["max_w"] = res.max_w;
        j["max_z"] = res.max_z;
        j["all_passed"] = res.checks.all_passed();
        j["timings"] = {{"verify_seconds", seconds_since(t0)}};
        *out = new bx_report{j.dump(2), res.checks.all_passed()};
        return BX_OK;
    });
}

int bx_oracle(const bx_weights* ws, const bx_form* form, int m, int points, uint64_t seed, bx_report** out) {
    BX_REQUIRE(ws);
    BX_REQUIRE(form);
    BX_REQUIRE(out);
    if (points < 1) return set_error(BX_ERR_INVALID_ARGUMENT, "InvalidArgument: at least one point is needed");
    return guarded([&] {
        Transform tr(ws->ws);
        Decomposition D = tr.decompose(form->u);
        CheckList checks;
        std::vector<OracleSample> samples;
        check_oracle(tr, D, points, seed, checks, m, &samples);
        json j;
        j["command"] = "oracle";
        j["m"] = m;
        j["points"] = points;
        j["seed"] = seed;
        j["mesh_hash"] = ws->ws.mesh->hash();
        j["checks"] = checks_json(checks.checks());
        json s = json::array();
        for (const auto& smp : samples) s.push_back({{"x", point_json(smp.x)}, {"m", smp.m}, {"C_m", value_json(smp.c_m)}});
        j["samples"] = s;
        j["all_passed"] = checks.all_passed();
        *out = new bx_report{j.dump(2), checks.all_passed()};
        return BX_OK;
    });
}

int bx_stability(const bx_weights* ws, int k, int degree, int trials, uint64_t seed, bx_report** out) {
    BX_REQUIRE(ws);
    BX_REQUIRE(out);
    return guarded([&] {
        const int n = ws->ws.mesh->dim();
        if (k < 0 || k > n) fail(Err::InvalidArgument, "form degree out of range");
        if (degree < 1 || trials < 1) fail(Err::InvalidArgument, "degree and trials must be positive");
        StabilityReport r = stability_report(ws->ws, k, degree, trials, seed);
        json j;
        j["command"] = "stability";
        j["mesh_hash"] = ws->ws.mesh->hash();
        j["k"] = r.k;
        j["degree"] = r.degree;
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        j["bubble_ratio"] = r.bubble_ratio;
        j["w_ratio"] = r.w_ratio;
        j["bubble_max"] = r.bubble_max;
        j["bubble_median"] = r.bubble_median;
        j["w_max"] = r.w_max;
        j["w_median"] = r.w_median;
        *out = new bx_report{j.dump(2), true};
        return BX_OK;
    });
}

}  // extern "C"

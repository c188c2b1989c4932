// Acceptance run: one PASS/FAIL line per criterion on the bundled fixtures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "random_forms.hpp"
#include "transform.hpp"
#include "verify.hpp"
#include "weights.hpp"

using namespace bubblex;

namespace {

std::string fixtures_dir;

MeshPtr fixture(const std::string& name) { return load_mesh(fixtures_dir + "/" + name + ".json"); }

// Tally for one criterion: instance count and the first failure.
struct Tally {
    long instances = 0;
    long failures = 0;
    std::string first;
    void add(bool ok, const std::string& what) {
        ++instances;
        if (!ok && failures++ == 0) first = what;
    }
    void absorb(const CheckList& checks, const std::string& ctx) {
        for (const auto& c : checks.checks()) {
            instances += c.count;
            if (!c.passed && failures++ == 0) first = ctx + " " + c.name + " " + c.witness;
        }
    }
    bool ok() const { return failures == 0 && instances > 0; }
};

void report(int id, const std::string& title, const Tally& t, const std::string& extra = "") {
    std::printf("criterion %d %s: %s (%ld instances%s%s)\n", id, title.c_str(), t.ok() ? "PASS" : "FAIL", t.instances,
                extra.empty() ? "" : ", ", extra.c_str());
    if (!t.ok()) std::printf("  first failure: %s\n", t.instances ? t.first.c_str() : "no instances");
    std::fflush(stdout);
}

std::string ctx(const std::string& mesh, int k, int r, int s, bool trimmed = false) {
    std::ostringstream o;
    o << mesh << " k=" << k << " r=" << r << " sample=" << s << (trimmed ? " trimmed" : "");
    return o.str();
}

// Faces of dimension n-1 of every cell carry no trace of u - W - sum of lower bubbles.
bool lower_residual_traceless(const Mesh& M, const Decomposition& D, std::string& where) {
    const int n = M.dim();
    PiecewiseForm v = D.u - D.W;
    for (const auto& [f, B] : D.bubbles)
        if (static_cast<int>(f.size()) - 1 <= n - 1) v -= B;
    for (int c = 0; c < M.num_cells(); ++c)
        for (const auto& face : all_faces(M.cell(c).verts)) {
            if (static_cast<int>(face.size()) != n) continue;
            if (!trace_on_cell(M, v.cells[c], c, face).is_zero()) {
                where = "cell " + std::to_string(c) + " face " + simplex_str(face);
                return false;
            }
        }
    return true;
}

bool outside_star_zero(const Mesh& M, const Simplex& f, const PiecewiseForm& B) {
    const auto& st = M.star(f);
    for (int c = 0; c < M.num_cells(); ++c)
        if (std::find(st.begin(), st.end(), c) == st.end() && !B.cells[c].is_zero()) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    fixtures_dir = argc > 1 ? argv[1] : "fixtures";
    const int samples = argc > 2 ? std::atoi(argv[2]) : 5;
    const auto t0 = std::chrono::steady_clock::now();

    Tally c1, c2, c3, c4, c5, c6, c7, c8;
    try {
        for (const std::string name : {"diamond2d", "twotet3d"}) {
            const MeshPtr mesh = fixture(name);
            const Mesh& M = *mesh;
            const int n = M.dim();
            const WeightSystem ws = build_weight_system(mesh);
            const Transform tr(ws);
            {
                CertificateReport cert = certify_weight_system(ws);
                CheckList cl;
                cl.merge(cert.checks);
                c6.absorb(cl, name);
            }
            for (int k = 0; k <= n; ++k)
                for (int r = 1; r <= 3; ++r)
                    for (bool trimmed : {false, true})
                        for (int s = 0; s < samples; ++s) {
                            const uint64_t seed = 1000003ull * k + 10007ull * r + 101ull * s + (trimmed ? 7 : 0);
                            const std::string where = ctx(name, k, r, s, trimmed);
                            const PiecewiseForm u = random_form(mesh, k, r, trimmed, seed);
                            const Decomposition D = tr.decompose(u);

                            PiecewiseForm rest = u - D.W;
                            for (const auto& [f, B] : D.bubbles) rest -= B;
                            if (!trimmed) c1.add(rest.is_zero(), where);

                            for (const auto& [f, B] : D.bubbles) {
                                c3.add(membership(B, Space::P, r), where + " B_" + simplex_str(f) + " in P_r");
                                if (trimmed)
                                    c3.add(membership(B, Space::PMinus, r),
                                           where + " B_" + simplex_str(f) + " in P_r^-");
                                c4.add(outside_star_zero(M, f, B), where + " support of B_" + simplex_str(f));
                            }

                            std::string face;
                            c5.add(lower_residual_traceless(M, D, face), where + " " + face);

                            if (trimmed) continue;
                            if (k <= n - 1) {
                                const PiecewiseForm du = exterior_derivative(u);
                                const Decomposition D1 = tr.decompose(du);
                                c2.add(exterior_derivative(D.W) == D1.W, where + " W");
                                for (const auto& [f, B] : D.bubbles)
                                    c2.add(exterior_derivative(B) == D1.bubbles.at(f), where + " B_" + simplex_str(f));
                            }
                            {
                                CheckList ops;
                                check_operator_relations(ws, u, ops);
                                c7.absorb(ops, where);
                            }
                            if (s == 0) {
                                CheckList dep;
                                check_dependence(tr, u, D, seed, dep);
                                c4.absorb(dep, where);
                            }
                            if (s < 2) {
                                CheckList orc;
                                check_oracle(tr, D, 10, seed, orc);
                                c8.absorb(orc, where);
                            }
                        }
        }
        {
            const MeshPtr mesh = fixture("diamond2d_r1");
            const WeightSystem ws = build_weight_system(mesh);
            const Transform tr(ws);
            CertificateReport cert = certify_weight_system(ws);
            CheckList cl;
            cl.merge(cert.checks);
            c6.absorb(cl, "diamond2d_r1");
            for (int k = 0; k <= 2; ++k) {
                const PiecewiseForm u = random_form(mesh, k, 2, false, 77 + k);
                const Decomposition D = tr.decompose(u);
                CheckList dep;
                check_dependence(tr, u, D, 77 + k, dep);
                c4.absorb(dep, ctx("diamond2d_r1", k, 2, 0));
                for (const auto& [f, B] : D.bubbles)
                    c4.add(outside_star_zero(*mesh, f, B), ctx("diamond2d_r1", k, 2, 0) + " support of B_" + simplex_str(f));
            }
        }
    } catch (const Error& e) {
        std::printf("error: %s\n", e.what());
        return 1;
    }

    report(1, "decomposition identity", c1);
    report(2, "commutation with d", c2);
    report(3, "space preservation", c3);
    report(4, "locality and dependence", c4);
    report(5, "zero trace of the lower residual", c5);
    report(6, "weight-system certificates", c6);
    report(7, "operator relations", c7);
    report(8, "oracle consistency", c8);

    // Soft check: growth of the max bubble ratio under one uniform refinement.
    Tally c9;
    std::ostringstream info;
    try {
        const WeightSystem coarse = build_weight_system(fixture("diamond2d"));
        const WeightSystem fine = build_weight_system(fixture("diamond2d_r1"));
        for (int k = 0; k <= 1; ++k) {
            StabilityReport a = stability_report(coarse, k, 2, 20, 9 + k);
            StabilityReport b = stability_report(fine, k, 2, 20, 9 + k);
            const bool finite = std::isfinite(a.bubble_max) && std::isfinite(b.bubble_max) && a.bubble_max > 0;
            const double growth = finite ? b.bubble_max / a.bubble_max : INFINITY;
            c9.add(finite && growth < 2.0, "k=" + std::to_string(k) + " growth " + std::to_string(growth));
            info << "k=" << k << " max " << a.bubble_max << " -> " << b.bubble_max << " growth " << growth << "; ";
        }
    } catch (const Error& e) {
        c9.add(false, e.what());
    }
    std::string extra = info.str();
    if (!extra.empty()) extra.resize(extra.size() - 2);
    report(9, "stability monitoring (soft)", c9, extra);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("elapsed %.1f s\n", secs);
    const bool all = c1.ok() && c2.ok() && c3.ok() && c4.ok() && c5.ok() && c6.ok() && c7.ok() && c8.ok() && c9.ok();
    return all ? 0 : 1;
}

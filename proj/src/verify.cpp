#include "verify.hpp"

#include <algorithm>

#include "errors.hpp"
#include "random_forms.hpp"

namespace bubblex {

void CheckList::record(const std::string& name, bool ok, const std::string& witness) {
    CheckResult& c = get(name);
    ++c.count;
    if (!ok && c.passed) {
        c.passed = false;
        c.witness = witness;
    }
}

void CheckList::touch(const std::string& name) { get(name); }

void CheckList::merge(const std::vector<CheckResult>& other, const std::string& prefix) {
    for (const auto& o : other) {
        CheckResult& c = get(prefix + o.name);
        c.count += o.count;
        if (!o.passed && c.passed) {
            c.passed = false;
            c.witness = o.witness;
        }
    }
}

bool CheckList::all_passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CheckList::find(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

CheckResult& CheckList::get(const std::string& name) {
    for (auto& c : checks_)
        if (c.name == name) return c;
    checks_.push_back(CheckResult{name, true, "", 0});
    return checks_.back();
}

namespace {

Q sign_of(int e) { return (e & 1) ? Q(-1) : Q(1); }

bool same(const RefForm& a, const RefForm& b) { return a.anchor == b.anchor && a.form == b.form; }

std::string pair_str(const Simplex& e, const Simplex& f) {
    return "(" + simplex_str(e) + "," + simplex_str(f) + ")";
}

const std::vector<Simplex>& link_simplices(const Mesh& M, const Simplex& f, int j) {
    return f.empty() ? M.simplices(j) : M.link(f).of_dim(j);
}

int degree_class(const PiecewiseForm& u) { return std::max(1, u.poly_degree()); }

// The tensor-factor derivative on the corner simplex of a y-first product form of y-degree j.
Form d_corner(const Form& w, int n, int p, int j) {
    Form d = partial_exterior_derivative(w, n, p);
    if (j & 1) d *= Q(-1);
    return d;
}

void check_divisible(const RefForm& R, int power, int r, int rt, const std::string& tag, const std::string& wit,
                     CheckList& out) {
    RefForm q;
    try {
        q = divide_by_b(R, power);
    } catch (const Error& e) {
        out.record(tag + "-divisible", false, wit + ": " + e.detail());
        return;
    }
    out.record(tag + "-divisible", same(multiply_by_b(q, power), R), wit);
    out.record(tag + "-quotient-in-P", in_space(q.form, Space::P, r), wit);
    if (rt > 0) out.record(tag + "-quotient-in-P-minus", in_space(q.form, Space::PMinus, rt), wit);
}

// Smallest s in {r, r+1} with u in P_s^-, or 0. Top-degree forms of degree r sit in P_{r+1}^-.
int trimmed_class(const PiecewiseForm& u, int r) {
    for (int s : {r, r + 1})
        if (membership(u, Space::PMinus, s)) return s;
    return 0;
}

}  // namespace

void check_operator_relations(const WeightSystem& ws, const PiecewiseForm& u, CheckList& out) {
    const MeshPtr& mesh = ws.mesh;
    const Mesh& M = *mesh;
    const int n = M.dim();
    const int k = u.k;
    const int r = degree_class(u);
    const int rt = trimmed_class(u, r);
    const PiecewiseForm du = k < n ? exterior_derivative(u) : PiecewiseForm::zero(mesh, k);
    Reducer ru(ws, u);
    std::unique_ptr<Reducer> rdu;
    if (k < n) rdu = std::make_unique<Reducer>(ws, du);

    for (int m = -1; m <= n - 1; ++m)
        for (const auto& f : M.simplices(m)) {
            const int top = n - m - 1;
            for (int j = 0; j <= top; ++j)
                for (const auto& e : link_simplices(M, f, j)) {
                    const std::string wit = pair_str(e, f);
                    const RefForm R = ru.reduce(e, f);
                    RefForm deltaR = RefForm::zero(f, std::max(k - j + 1, 0));
                    RefForm qplus = RefForm::zero(f, std::max(k - j, 0));
                    RefForm rplus = RefForm::zero(f, std::max(k - j + 1, 0));
                    for (size_t i = 0; i < e.size(); ++i) {
                        Simplex ei = e;
                        ei.erase(ei.begin() + static_cast<long>(i));
                        Simplex fi = simplex_union(f, Simplex{e[i]});
                        const Q s = sign_of(static_cast<int>(i));
                        if (j >= 1) deltaR = deltaR + ru.reduce(ei, f) * s;
                        qplus = qplus + restrict_anchor(ru.reduce_q(ei, fi), f) * s;
                        if (j >= 1) rplus = rplus + restrict_anchor(ru.reduce(ei, fi), f) * s;
                    }
                    if (rdu && j <= k + 1) {
                        RefForm rhs = exterior_derivative(R) * sign_of(j) - deltaR;
                        out.record("R-d-relation", same(rdu->reduce(e, f), rhs), wit);
                    }
                    out.record("Q-R-equivalence", same(qplus, R), wit);
                    if (j >= 1) out.record("delta-plus-R", rplus.form.is_zero(), wit);
                    if (j == 0) {
                        Simplex ef = simplex_union(e, f);
                        if (n + static_cast<int>(ef.size()) <= kMaxVars)
                            out.record("R-vertex-average", same(R, restrict_anchor(ru.average(ef), f) * Q(-1)), wit);
                    }
                    if (j <= k) check_divisible(R, j, r, rt, "R", wit, out);
                    if (j + 1 <= k && m >= 0) check_divisible(ru.reduce_q(e, f), j + 1, r, rt, "Q", wit, out);
                }

            if (m < 0) continue;
            const RefForm A = ru.average(f);
            if (rdu) out.record("average-d-commutation", same(exterior_derivative(A), rdu->average(f)), simplex_str(f));
            if (m >= k)
                for (int c : M.star(f)) {
                    Form lhs = trace_on_cell(M, pullback_corner_on_cell(M, c, f, A), c, f);
                    out.record("average-trace", lhs == trace_on_cell(M, u.cells[c], c, f), simplex_str(f));
                }
        }

    // Top-degree Q identity on stars.
    for (int m = 1; m <= n; ++m)
        for (const auto& f : M.simplices(m - 1)) {
            const int top = n - m;
            const auto& es = M.link(f).of_dim(top);
            for (const auto& g : all_faces(f))
                for (int c : M.star(f)) {
                    Form lhs(n, k), rhs(n, k);
                    for (const auto& e : es) {
                        const Form& phi = M.whitney(c, e);
                        RefForm inner = exterior_derivative(ru.reduce_q(e, f)) * Q(-1);
                        if (rdu) inner = inner + rdu->reduce_q(e, f) * sign_of(top + 1);
                        if (!inner.form.is_zero()) lhs += wedge(phi, pullback_corner_on_cell(M, c, g, inner));
                        RefForm R = ru.reduce(e, f);
                        if (!R.form.is_zero()) {
                            Form beta = materialize_on_cell(M, beta_cochain(ws, e, f), c);
                            rhs += wedge(beta, pullback_corner_on_cell(M, c, g, R));
                        }
                    }
                    out.record("Q-top-identity", lhs == rhs, "f=" + simplex_str(f) + " g=" + simplex_str(g));
                }
        }

    // Residual identity under L_g^*.
    for (int m = 0; m <= n - 1; ++m)
        for (int j = 0; j < n - m && j <= k; ++j)
            for (int s = -1; s <= m - 1; ++s)
                for (const auto& g : M.simplices(s)) {
                    PiecewiseForm lhs = PiecewiseForm::zero(mesh, k), rhs = PiecewiseForm::zero(mesh, k);
                    for (const auto& [e, f] : pair_set(M, j, m)) {
                        if (!is_face(g, f)) continue;
                        RefForm R = ru.reduce(e, f);
                        if (R.form.is_zero()) continue;
                        lhs += wedge(materialize(mesh, psi(ws, e, g, f)), pullback_corner(mesh, g, R));
                    }
                    for (const auto& [e, f] : pair_set(M, j, m - 1)) {
                        if (!is_face(g, f)) continue;
                        RefForm R = ru.reduce(e, f);
                        if (R.form.is_zero()) continue;
                        rhs += wedge(whitney(mesh, e), pullback_corner(mesh, g, R));
                    }
                    out.record("residual-identity-R", lhs == rhs,
                               "g=" + simplex_str(g) + " j=" + std::to_string(j) + " m=" + std::to_string(m));
                }

    // Bidegree split of d under the contraction.
    if (k < n)
        for (int m = 0; m <= n - 1; ++m)
            for (const auto& f : M.simplices(m)) {
                const int p = static_cast<int>(f.size());
                for (int c : M.star(f)) {
                    Form gu = contraction_pullback(M, u.cells[c], f);
                    Form gdu = contraction_pullback(M, du.cells[c], f);
                    for (int j = 1; j <= k; ++j) {
                        Form lhs = partial_exterior_derivative(bidegree_part(gu, n, j - 1), 0, n);
                        Form ds = d_corner(bidegree_part(gu, n, j), n, p, j);
                        lhs += ds * sign_of(j);
                        out.record("bidegree-d-split", lhs == bidegree_part(gdu, n, j),
                                   "f=" + simplex_str(f) + " j=" + std::to_string(j));
                    }
                }
            }
}

void check_decomposition(const Transform& tr, const PiecewiseForm& u, const Decomposition& D, bool with_du,
                         CheckList& out) {
    const Mesh& M = *u.mesh;
    const int r = degree_class(u);
    const int rt = trimmed_class(u, r);
    out.record("decomposition-identity", D.residual_zero);
    out.record("trace-zero", D.trace_zero, simplex_str(D.trace_witness));
    out.record("W-trimmed-linear", membership(D.W, Space::PMinus, 1));
    for (const auto& [f, B] : D.bubbles) {
        const std::string wit = simplex_str(f);
        const auto& st = M.star(f);
        bool local = true;
        for (int c = 0; c < M.num_cells(); ++c)
            if (!std::binary_search(st.begin(), st.end(), c) && !B.cells[c].is_zero()) local = false;
        out.record("bubble-support", local, wit);
        auto conf = conformity_check(B);
        out.record("bubble-conformity", conf.conforming, wit + " on " + simplex_str(conf.witness));
        out.record("bubble-in-P", membership(B, Space::P, r), wit);
        if (rt > 0) out.record("bubble-in-P-minus", membership(B, Space::PMinus, rt), wit);
    }
    if (with_du && u.k < M.dim()) {
        Decomposition D1 = tr.decompose(exterior_derivative(u));
        for (const auto& [f, B] : D.bubbles)
            out.record("commutation-bubble", exterior_derivative(B) == D1.bubbles.at(f), simplex_str(f));
        out.record("commutation-W", exterior_derivative(D.W) == D1.W);
    }
}

void check_dependence(const Transform& tr, const PiecewiseForm& u, const Decomposition& D, uint64_t seed,
                      CheckList& out) {
    const MeshPtr& mesh = u.mesh;
    const Mesh& M = *mesh;
    const int n = M.dim();
    for (int c = 0; c < M.num_cells(); ++c) {
        PiecewiseForm v = u + cell_perturbation(mesh, u.k, c, seed + static_cast<uint64_t>(c));
        Decomposition Dv = tr.decompose(v);
        for (const auto& [f, B] : D.bubbles) {
            std::vector<int> dom = sdim(f) == n ? M.extended_star(f) : M.star(f);
            if (std::find(dom.begin(), dom.end(), c) != dom.end()) continue;
            out.record("dependence", Dv.bubbles.at(f) == B,
                       "bubble " + simplex_str(f) + " changed by cell " + simplex_str(M.cell(c).verts));
        }
    }
}

namespace {

PointValue combine(const PointValue& a, const PointValue& b, const Q& s) {
    PointValue out = a;
    for (const auto& [m, v] : b) {
        Q& slot = out[m];
        slot += v * s;
        if (sgn(slot) == 0) out.erase(m);
    }
    return out;
}

std::string point_str(const std::vector<Q>& x) {
    std::string s = "(";
    for (size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + to_string(x[i]);
    return s + ")";
}

}  // namespace

void check_oracle(const Transform& tr, const Decomposition& D, int points, uint64_t seed, CheckList& out, int level,
                  std::vector<OracleSample>* samples) {
    const WeightSystem& ws = tr.weights();
    const Mesh& M = *ws.mesh;
    const int n = M.dim();
    if (level < -1 || level > n) fail(Err::InvalidArgument, "oracle level out of range");
    auto wanted = [&](int m) { return level < 0 || level == m; };
    Reducer ru(ws, D.u);
    RationalRng rng(seed);
    for (int i = 0; i < points; ++i) {
        const int cell = rng.uniform(0, M.num_cells() - 1);
        const std::vector<Q> x = random_interior_point(M, cell, rng);
        const std::string wit = "x=" + point_str(x);
        std::vector<PointValue> C(n);
        for (int m = 0; m <= n - 1; ++m) {
            const bool needed = wanted(m) || (m + 1 <= n - 1 && wanted(m + 1)) || (m == n - 1 && wanted(n));
            if (!needed) continue;
            C[m] = c_m_point_eval(ru, m, x);
            if (samples && wanted(m)) samples->push_back(OracleSample{x, m, C[m]});
        }

        if (wanted(0)) {
            PointValue rhs = point_eval(D.W, x);
            for (const auto& f : M.simplices(0))
                rhs = combine(rhs, point_eval(D.k_table.at({0, KBranch::SameLevel, f}), x), 1);
            out.record("oracle-C0", rhs == C[0], wit);
        }

        for (int m = 1; m <= n - 1; ++m) {
            if (!wanted(m)) continue;
            PointValue sum;
            for (const auto& f : M.simplices(m))
                sum = combine(sum, point_eval(D.k_table.at({m, KBranch::SameLevel, f}), x), 1);
            for (const auto& f : M.simplices(m - 1))
                sum = combine(sum, point_eval(D.k_table.at({m, KBranch::LowerLevel, f}), x), 1);
            out.record("oracle-telescope", combine(C[m], C[m - 1], -1) == sum, wit + " m=" + std::to_string(m));
        }

        if (wanted(n)) {
            PointValue top;
            for (const auto& T : M.simplices(n)) top = combine(top, point_eval(D.bubbles.at(T), x), 1);
            out.record("oracle-closure", combine(point_eval(D.u, x), C[n - 1], -1) == top, wit);
        }
    }
}

VerifyResult verify_form(const WeightSystem& ws, const PiecewiseForm& u, const VerifyOptions& opt) {
    VerifyResult res;
    CertificateReport cert = certify_weight_system(ws);
    res.checks.merge(cert.checks, "weights/");
    res.notes = cert.notes;
    res.max_w = cert.max_w;
    res.max_z = cert.max_z;

    auto conf = conformity_check(u);
    res.checks.record("input-conformity", conf.conforming, simplex_str(conf.witness));
    if (!conf.conforming) return res;

    Transform tr(ws);
    try {
        Decomposition D = tr.decompose(u);
        res.checks.record("construction", true);
        check_decomposition(tr, u, D, true, res.checks);
        check_operator_relations(ws, u, res.checks);
        check_dependence(tr, u, D, opt.seed, res.checks);
        if (opt.full) check_oracle(tr, D, opt.points, opt.seed, res.checks);
    } catch (const Error& e) {
        res.checks.record("construction", false, e.what());
    }
    return res;
}

}  // namespace bubblex

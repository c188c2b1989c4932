#include "chains.hpp"

#include <set>

#include "errors.hpp"

namespace bubblex {

void chain_add(Chain& c, const Simplex& s, const Q& v) {
    if (sgn(v) == 0) return;
    auto it = c.find(s);
    if (it == c.end()) {
        c.emplace(s, v);
        return;
    }
    it->second += v;
    if (sgn(it->second) == 0) c.erase(it);
}

int Carrier::top() const { return mesh_ ? mesh_->dim() : link_->top; }

const std::vector<Simplex>& Carrier::simplices(int d) const {
    return mesh_ ? mesh_->simplices(d) : link_->of_dim(d);
}

Chain boundary(const Chain& c) {
    Chain out;
    for (const auto& [t, v] : c) {
        if (t.size() == 1) {
            chain_add(out, Simplex{}, v);
            continue;
        }
        for (size_t i = 0; i < t.size(); ++i) {
            Simplex s = t;
            s.erase(s.begin() + static_cast<long>(i));
            chain_add(out, s, (i & 1) ? Q(-v) : v);
        }
    }
    return out;
}

Chain coboundary(const Carrier& carrier, const Chain& c, int j) {
    Chain out;
    for (const auto& t : carrier.simplices(j + 1)) {
        Q s = 0;
        for (size_t i = 0; i < t.size(); ++i) {
            Simplex f = t;
            f.erase(f.begin() + static_cast<long>(i));
            auto it = c.find(f);
            if (it == c.end()) continue;
            if (i & 1)
                s -= it->second;
            else
                s += it->second;
        }
        chain_add(out, t, s);
    }
    return out;
}

Q top_coboundary(const Link& link, const Chain& c) {
    Q s = 0;
    for (const auto& [e, v] : c) {
        auto it = link.top_sign.find(e);
        if (it == link.top_sign.end()) fail(Err::IndexMismatch, simplex_str(e) + " is not a top simplex of the link");
        s += it->second * v;
    }
    return s;
}

namespace {

std::map<Simplex, int> index_of(const std::vector<Simplex>& v) {
    std::map<Simplex, int> idx;
    for (size_t i = 0; i < v.size(); ++i) idx[v[i]] = static_cast<int>(i);
    return idx;
}

QMatrix rhs_matrix(int rows, const std::vector<Chain>& cols, const std::map<Simplex, int>& idx) {
    QMatrix b(rows, std::vector<Q>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto& [s, v] : cols[j]) {
            auto it = idx.find(s);
            if (it == idx.end()) fail(Err::IndexMismatch, simplex_str(s) + " is outside the carrier");
            b[it->second][j] = v;
        }
    return b;
}

}  // namespace

PotentialResult solve_potential(const Link& link, int k, const std::vector<Chain>& rhs) {
    if (k < 0 || k >= link.top) fail(Err::InvalidArgument, "potential degree out of range");
    for (const auto& c : rhs)
        if (!boundary(c).empty()) fail(Err::NotClosed, "right-hand side has nonzero boundary on the link of " + simplex_str(link.f));
    const auto& rows_s = link.of_dim(k);
    const auto& cols_s = link.of_dim(k + 1);
    const int nr = static_cast<int>(rows_s.size());
    const int nc = static_cast<int>(cols_s.size());
    auto ridx = index_of(rows_s);

    QMatrix bd(nr, std::vector<Q>(nc));
    for (int j = 0; j < nc; ++j) {
        Chain one{{cols_s[j], Q(1)}};
        for (const auto& [s, v] : boundary(one)) bd[ridx.at(s)][j] = v;
    }
    QMatrix gauge;
    if (k + 1 == link.top) {
        std::vector<Q> row(nc);
        for (int j = 0; j < nc; ++j) row[j] = link.top_sign.at(cols_s[j]);
        gauge.push_back(row);
    } else {
        auto cidx = index_of(cols_s);
        for (const auto& t : link.of_dim(k + 2)) {
            std::vector<Q> row(nc);
            for (size_t i = 0; i < t.size(); ++i) {
                Simplex f = t;
                f.erase(f.begin() + static_cast<long>(i));
                row[cidx.at(f)] += (i & 1) ? -1 : 1;
            }
            gauge.push_back(row);
        }
    }
    QMatrix b = rhs_matrix(nr, rhs, ridx);
    QMatrix a = bd;
    QMatrix bb = b;
    for (auto& row : gauge) {
        a.push_back(row);
        bb.emplace_back(rhs.size(), Q(0));
    }
    PotentialResult out;
    auto sol = solve_linear(a, bb, nc);
    if (sol.status != SolveResult::Unique) {
        auto plain = solve_linear(bd, b, nc);
        if (sol.status == SolveResult::Inconsistent && plain.status == SolveResult::Unique) {
            sol = plain;
            out.branch = PotentialBranch::GaugeDropped;
        } else {
            fail(Err::NoSolution, "link complex of " + simplex_str(link.f) + " is not exact in degree " +
                                      std::to_string(k + 1));
        }
    }
    out.columns.resize(rhs.size());
    for (size_t j = 0; j < rhs.size(); ++j)
        for (int i = 0; i < nc; ++i) chain_add(out.columns[j], cols_s[i], sol.x[i][j]);
    return out;
}

Chain solve_trimmed_local(const Mesh& mesh, const Simplex& f, int q, const Chain& target) {
    std::vector<Simplex> unknowns;
    for (const auto& g : mesh.simplices(q))
        if (is_face(f, g) && !mesh.on_boundary(g)) unknowns.push_back(g);
    std::vector<Simplex> eq_rows;
    for (const auto& t : mesh.simplices(q + 1))
        if (is_face(f, t) || target.count(t)) eq_rows.push_back(t);
    for (const auto& [t, v] : target)
        if (sdim(t) != q + 1 || !mesh.has(t)) fail(Err::IndexMismatch, "target entry " + simplex_str(t) + " has the wrong dimension");
    std::vector<Simplex> gauge_rows;
    if (q >= 1)
        for (const auto& h : mesh.simplices(q - 1))
            if (is_face(f, h)) gauge_rows.push_back(h);
    auto uidx = index_of(unknowns);
    const int nc = static_cast<int>(unknowns.size());
    QMatrix a;
    QMatrix b;
    for (const auto& t : eq_rows) {
        std::vector<Q> row(nc);
        for (size_t i = 0; i < t.size(); ++i) {
            Simplex g = t;
            g.erase(g.begin() + static_cast<long>(i));
            auto it = uidx.find(g);
            if (it != uidx.end()) row[it->second] += (i & 1) ? -1 : 1;
        }
        a.push_back(row);
        auto tv = target.find(t);
        b.push_back({tv == target.end() ? Q(0) : tv->second});
    }
    for (const auto& h : gauge_rows) {
        std::vector<Q> row(nc);
        for (int j = 0; j < nc; ++j) {
            const auto& g = unknowns[j];
            if (!is_face(h, g)) continue;
            int x = simplex_minus(g, h)[0];
            row[j] += (position(g, x) & 1) ? -1 : 1;
        }
        a.push_back(row);
        b.push_back({Q(0)});
    }
    Chain out;
    if (nc == 0) {
        for (const auto& [t, v] : target)
            if (sgn(v) != 0) fail(Err::Incompatible, "target is not in the range of delta near " + simplex_str(f));
        return out;
    }
    auto sol = solve_linear(a, b, nc);
    if (sol.status == SolveResult::Inconsistent)
        fail(Err::Incompatible, "target is not in the range of delta near " + simplex_str(f));
    if (sol.status == SolveResult::Underdetermined)
        fail(Err::NoSolution, "local trimmed complex near " + simplex_str(f) + " is not exact");
    for (int j = 0; j < nc; ++j) chain_add(out, unknowns[j], sol.x[j][0]);
    return out;
}

std::vector<Pair> pair_set(const Mesh& mesh, int j, int m) {
    std::vector<Pair> out;
    if (m < -1 || m > mesh.dim()) return out;
    if (j == -1) {
        for (const auto& f : mesh.simplices(m)) out.push_back({Simplex{}, f});
        return out;
    }
    if (j < 0 || j >= mesh.dim() - m) return out;
    for (const auto& f : mesh.simplices(m))
        for (const auto& e : mesh.link(f).of_dim(j)) out.push_back({e, f});
    return out;
}

}  // namespace bubblex

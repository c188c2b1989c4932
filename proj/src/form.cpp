#include "form.hpp"

#include <bit>

#include "errors.hpp"

namespace bubblex {

int popcount(uint32_t m) { return std::popcount(m); }

int wedge_sign(uint32_t a, uint32_t b) {
    if (a & b) return 0;
    int inv = 0;
    for (uint32_t bb = b; bb; bb &= bb - 1) {
        int j = std::countr_zero(bb);
        inv += std::popcount(a >> (j + 1));
    }
    return (inv & 1) ? -1 : 1;
}

Form Form::scalar(int nvars, const Poly& p) {
    Form f(nvars, 0);
    f.add(0, p);
    return f;
}

Form Form::differential(int nvars, int v) {
    Form f(nvars, 1);
    f.add(uint32_t{1} << v, Poly(Q(1)));
    return f;
}

const Poly& Form::component(uint32_t mask) const {
    static const Poly zero;
    auto it = c_.find(mask);
    return it == c_.end() ? zero : it->second;
}

void Form::add(uint32_t mask, const Poly& p) {
    if (p.is_zero()) return;
    auto it = c_.find(mask);
    if (it == c_.end()) {
        c_.emplace(mask, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) c_.erase(it);
}

int Form::poly_degree() const {
    int d = -1;
    for (const auto& [m, p] : c_) d = std::max(d, p.degree());
    return d;
}

Form& Form::operator+=(const Form& o) {
    if (o.is_zero()) return *this;
    if (is_zero() && c_.empty()) {
        nvars_ = std::max(nvars_, o.nvars_);
        k_ = o.k_;
    } else if (o.k_ != k_) {
        fail(Err::DegreeMismatch, "adding forms of different degree");
    }
    for (const auto& [m, p] : o.c_) add(m, p);
    return *this;
}

Form& Form::operator-=(const Form& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        nvars_ = std::max(nvars_, o.nvars_);
        k_ = o.k_;
    } else if (o.k_ != k_) {
        fail(Err::DegreeMismatch, "subtracting forms of different degree");
    }
    for (const auto& [m, p] : o.c_) add(m, -p);
    return *this;
}

Form& Form::operator*=(const Q& c) {
    if (sgn(c) == 0) {
        c_.clear();
        return *this;
    }
    for (auto& [m, p] : c_) p *= c;
    return *this;
}

Form& Form::operator*=(const Poly& q) {
    std::map<uint32_t, Poly> out;
    for (auto& [m, p] : c_) {
        Poly r = p * q;
        if (!r.is_zero()) out.emplace(m, std::move(r));
    }
    c_ = std::move(out);
    return *this;
}

bool Form::operator==(const Form& o) const {
    if (c_.empty() && o.c_.empty()) return true;
    return k_ == o.k_ && c_ == o.c_;
}

Form Form::homogeneous_part(int d) const {
    Form out(nvars_, k_);
    for (const auto& [m, p] : c_) out.add(m, p.homogeneous_part(d));
    return out;
}

std::map<uint32_t, Q> Form::eval(const std::vector<Q>& x) const {
    std::map<uint32_t, Q> out;
    for (const auto& [m, p] : c_) {
        Q v = p.eval(x);
        if (sgn(v) != 0) out.emplace(m, v);
    }
    return out;
}

Form wedge(const Form& a, const Form& b) {
    int nv = std::max(a.nvars(), b.nvars());
    if (a.degree() + b.degree() > nv)
        fail(Err::DegreeOverflow, "wedge degree exceeds ambient dimension");
    Form out(nv, a.degree() + b.degree());
    for (const auto& [ma, pa] : a.components())
        for (const auto& [mb, pb] : b.components()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            Poly p = pa * pb;
            if (s < 0) p = -p;
            out.add(ma | mb, p);
        }
    return out;
}

Form exterior_derivative(const Form& a) {
    Form out(a.nvars(), a.degree() + 1);
    for (const auto& [m, p] : a.components())
        for (int v = 0; v < a.nvars(); ++v) {
            if (m & (uint32_t{1} << v)) continue;
            Poly dp = p.derivative(v);
            if (dp.is_zero()) continue;
            int below = std::popcount(m & ((uint32_t{1} << v) - 1));
            if (below & 1) dp = -dp;
            out.add(m | (uint32_t{1} << v), dp);
        }
    return out;
}

Form koszul(const Form& a) {
    if (a.degree() == 0) return Form(a.nvars(), 0);
    Form out(a.nvars(), a.degree() - 1);
    for (const auto& [m, p] : a.components()) {
        int l = 0;
        for (uint32_t mm = m; mm; mm &= mm - 1, ++l) {
            int v = std::countr_zero(mm);
            Poly q = Poly::var(v) * p;
            if (l & 1) q = -q;
            out.add(m & ~(uint32_t{1} << v), q);
        }
    }
    return out;
}

Form pullback(const Form& a, const std::vector<Poly>& map, int new_nvars) {
    Form out(new_nvars, a.degree());
    if (a.is_zero()) return out;
    std::vector<Form> dmap;
    dmap.reserve(map.size());
    for (const auto& p : map) {
        Form d(new_nvars, 1);
        for (int v = 0; v < new_nvars; ++v) d.add(uint32_t{1} << v, p.derivative(v));
        dmap.push_back(std::move(d));
    }
    std::map<uint32_t, Form> basis;
    for (const auto& [m, p] : a.components()) {
        auto it = basis.find(m);
        if (it == basis.end()) {
            Form w = Form::scalar(new_nvars, Poly(Q(1)));
            for (uint32_t mm = m; mm; mm &= mm - 1) w = wedge(w, dmap[std::countr_zero(mm)]);
            it = basis.emplace(m, std::move(w)).first;
        }
        if (it->second.is_zero()) continue;
        Poly c = p.compose(map);
        if (c.is_zero()) continue;
        out += it->second * c;
    }
    return out;
}

std::map<uint32_t, Q> pullback_values(const std::map<uint32_t, Q>& vals,
                                      const std::vector<std::vector<Q>>& rows, int new_nvars) {
    int old_nvars = static_cast<int>(rows.size());
    int k = vals.empty() ? 0 : popcount(vals.begin()->first);
    Form a(old_nvars, k);
    for (const auto& [m, v] : vals) a.add(m, Poly(v));
    std::vector<Poly> map;
    for (const auto& r : rows) {
        Poly p;
        for (int v = 0; v < new_nvars; ++v) p += Poly::var(v) * r[v];
        map.push_back(p);
    }
    return pullback(a, map, new_nvars).eval({});
}

}  // namespace bubblex

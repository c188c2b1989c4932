#include "poly.hpp"

#include <algorithm>

namespace bubblex {

int mono::degree(uint64_t key) {
    int d = 0;
    for (; key; key >>= 8) d += static_cast<int>(key & 0xffu);
    return d;
}

Poly::Poly(const Q& c) {
    if (sgn(c) != 0) t_.emplace_back(0, c);
}

Poly Poly::var(int v) { return monomial(mono::unit(v), 1); }

Poly Poly::monomial(uint64_t key, const Q& c) {
    Poly p;
    if (sgn(c) != 0) p.t_.emplace_back(key, c);
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    Poly p;
    p.t_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.t_.empty() && p.t_.back().first == t.first)
            p.t_.back().second += t.second;
        else {
            if (!p.t_.empty() && sgn(p.t_.back().second) == 0) p.t_.pop_back();
            p.t_.push_back(std::move(t));
        }
    }
    if (!p.t_.empty() && sgn(p.t_.back().second) == 0) p.t_.pop_back();
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& t : t_) d = std::max(d, mono::degree(t.first));
    return d;
}

Q Poly::constant_term() const { return coefficient(0); }

Q Poly::coefficient(uint64_t key) const {
    auto it = std::lower_bound(t_.begin(), t_.end(), key,
                               [](const Term& t, uint64_t k) { return t.first < k; });
    if (it != t_.end() && it->first == key) return it->second;
    return 0;
}

namespace {

std::vector<Poly::Term> merge(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b,
                              int sign) {
    std::vector<Poly::Term> out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, sign > 0 ? Q(b[j].second) : Q(-b[j].second));
            ++j;
        } else {
            Q c = sign > 0 ? Q(a[i].second + b[j].second) : Q(a[i].second - b[j].second);
            if (sgn(c) != 0) out.emplace_back(a[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (o.t_.empty()) return *this;
    if (t_.empty()) {
        t_ = o.t_;
        return *this;
    }
    t_ = merge(t_, o.t_, 1);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.t_.empty()) return *this;
    t_ = merge(t_, o.t_, -1);
    return *this;
}

Poly& Poly::operator*=(const Q& c) {
    if (sgn(c) == 0) {
        t_.clear();
        return *this;
    }
    for (auto& t : t_) t.second *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.t_) t.second = -t.second;
    return p;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.t_.empty() || b.t_.empty()) return Poly();
    if (a.t_.size() == 1 && a.t_[0].first == 0) return b * a.t_[0].second;
    if (b.t_.size() == 1 && b.t_[0].first == 0) return a * b.t_[0].second;
    std::vector<Poly::Term> terms;
    terms.reserve(a.t_.size() * b.t_.size());
    for (const auto& x : a.t_)
        for (const auto& y : b.t_) terms.emplace_back(x.first + y.first, x.second * y.second);
    return Poly::from_terms(std::move(terms));
}

Poly Poly::derivative(int v) const {
    std::vector<Term> terms;
    for (const auto& t : t_) {
        int e = mono::exp(t.first, v);
        if (e == 0) continue;
        terms.emplace_back(t.first - mono::unit(v), t.second * e);
    }
    // Subtracting the same unit keeps the order, no merging needed.
    Poly p;
    p.t_ = std::move(terms);
    return p;
}

Q Poly::eval(const std::vector<Q>& x) const {
    Q s = 0;
    for (const auto& t : t_) {
        Q m = t.second;
        for (size_t v = 0; v < x.size() && v < static_cast<size_t>(kMaxVars); ++v) {
            int e = mono::exp(t.first, static_cast<int>(v));
            for (int i = 0; i < e; ++i) m *= x[v];
        }
        s += m;
    }
    return s;
}

Poly Poly::homogeneous_part(int d) const {
    Poly p;
    for (const auto& t : t_)
        if (mono::degree(t.first) == d) p.t_.push_back(t);
    return p;
}

Poly Poly::pow(int e) const {
    Poly r(Q(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

Poly Poly::compose(const std::vector<Poly>& subs) const {
    std::vector<std::vector<Poly>> powers(subs.size());
    auto power = [&](size_t v, int e) -> const Poly& {
        auto& pw = powers[v];
        if (pw.empty()) pw.emplace_back(Q(1));
        while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * subs[v]);
        return pw[e];
    };
    std::vector<Term> acc;
    for (const auto& t : t_) {
        Poly m(t.second);
        for (size_t v = 0; v < subs.size(); ++v) {
            int e = mono::exp(t.first, static_cast<int>(v));
            if (e) m = m * power(v, e);
            if (m.is_zero()) break;
        }
        acc.insert(acc.end(), m.t_.begin(), m.t_.end());
    }
    return from_terms(std::move(acc));
}

Poly Poly::rename(const std::vector<int>& perm) const {
    std::vector<Term> terms;
    terms.reserve(t_.size());
    for (const auto& t : t_) {
        uint64_t key = 0;
        for (size_t v = 0; v < perm.size(); ++v) {
            uint64_t e = mono::exp(t.first, static_cast<int>(v));
            key += e << (8 * perm[v]);
        }
        terms.emplace_back(key, t.second);
    }
    return from_terms(std::move(terms));
}

}  // namespace bubblex

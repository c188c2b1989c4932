#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace bubblex {

// Monomials are packed into 64 bits, one byte of exponent per variable.
constexpr int kMaxVars = 8;

namespace mono {
inline int exp(uint64_t key, int v) { return static_cast<int>((key >> (8 * v)) & 0xffu); }
inline uint64_t unit(int v) { return uint64_t{1} << (8 * v); }
int degree(uint64_t key);
// Keeps the exponents of variables [lo, lo+count) and shifts them down to 0.
inline uint64_t slice(uint64_t key, int lo, int count) {
    uint64_t k = key >> (8 * lo);
    return count >= 8 ? k : (k & ((uint64_t{1} << (8 * count)) - 1));
}
}  // namespace mono

class Poly {
  public:
    using Term = std::pair<uint64_t, Q>;

    Poly() = default;
    explicit Poly(const Q& c);
    static Poly var(int v);
    static Poly monomial(uint64_t key, const Q& c);
    static Poly from_terms(std::vector<Term> terms);  // merges duplicates

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    Q constant_term() const;
    Q coefficient(uint64_t key) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Q& c);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Q& c) { return a *= c; }
    friend Poly operator*(const Q& c, Poly a) { return a *= c; }
    friend Poly operator*(const Poly& a, const Poly& b);
    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(int v) const;
    Q eval(const std::vector<Q>& x) const;
    Poly homogeneous_part(int d) const;
    // Substitutes variable v by subs[v] (subs.size() covers every used variable).
    Poly compose(const std::vector<Poly>& subs) const;
    // Renames variable v to perm[v].
    Poly rename(const std::vector<int>& perm) const;
    Poly pow(int e) const;

  private:
    std::vector<Term> t_;  // sorted by key, nonzero coefficients
};

}  // namespace bubblex

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "poly.hpp"

namespace bubblex {

// A differential form with polynomial coefficients in `nvars` coordinates.
// Components are keyed by the bitmask of basis differentials dz_i, taken in
// increasing index order.
class Form {
  public:
    Form() = default;
    Form(int nvars, int k) : nvars_(nvars), k_(k) {}
    static Form scalar(int nvars, const Poly& p);
    static Form differential(int nvars, int v);  // dz_v

    int nvars() const { return nvars_; }
    int degree() const { return k_; }
    const std::map<uint32_t, Poly>& components() const { return c_; }
    const Poly& component(uint32_t mask) const;
    void add(uint32_t mask, const Poly& p);
    bool is_zero() const { return c_.empty(); }
    int poly_degree() const;  // max coefficient degree, -1 when zero

    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form& operator*=(const Q& c);
    Form& operator*=(const Poly& p);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Q& c) { return a *= c; }
    friend Form operator*(Form a, const Poly& p) { return a *= p; }
    bool operator==(const Form& o) const;
    bool operator!=(const Form& o) const { return !(*this == o); }

    Form homogeneous_part(int d) const;
    std::map<uint32_t, Q> eval(const std::vector<Q>& x) const;

  private:
    int nvars_ = 0;
    int k_ = 0;
    std::map<uint32_t, Poly> c_;
};

int popcount(uint32_t m);
// Sign of dz_A ^ dz_B relative to dz_{A|B}; 0 when A and B overlap.
int wedge_sign(uint32_t a, uint32_t b);

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);
// Contraction with the position field sum z_i d/dz_i.
Form koszul(const Form& a);
// Pullback along z = map(w), where map[i] is a polynomial in `new_nvars` variables.
Form pullback(const Form& a, const std::vector<Poly>& map, int new_nvars);
// Pointwise pullback of an alternating form with constant coefficients along
// the linear map whose rows are the differentials of the old coordinates.
std::map<uint32_t, Q> pullback_values(const std::map<uint32_t, Q>& vals,
                                      const std::vector<std::vector<Q>>& rows, int new_nvars);

}  // namespace bubblex

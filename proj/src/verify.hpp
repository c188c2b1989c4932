#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "transform.hpp"

namespace bubblex {

class CheckList {
  public:
    void record(const std::string& name, bool ok, const std::string& witness = "");
    void touch(const std::string& name);  // registers a check with no instances yet
    void merge(const std::vector<CheckResult>& other, const std::string& prefix = "");
    const std::vector<CheckResult>& checks() const { return checks_; }
    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;

  private:
    CheckResult& get(const std::string& name);
    std::vector<CheckResult> checks_;
};

// Exact operator identities for one input form: the d relation of R, the
// Q-R equivalence, delta+ R = 0, R = -A at vertices, the top-degree Q identity,
// divisibility by powers of b with polynomial class of the quotient,
// the residual identity under L_g^*, the bidegree split of d, and the
// d-commutation and trace reproduction of averages.
void check_operator_relations(const WeightSystem& ws, const PiecewiseForm& u, CheckList& out);

// Decomposition invariants for one input: identity, zero trace, support,
// conformity of bubbles, polynomial class and, when `with_du`, commutation.
void check_decomposition(const Transform& tr, const PiecewiseForm& u, const Decomposition& D, bool with_du,
                         CheckList& out);

// Perturbs u inside every cell in turn and compares the bubbles that must not see it.
void check_dependence(const Transform& tr, const PiecewiseForm& u, const Decomposition& D, uint64_t seed,
                      CheckList& out);

struct OracleSample {
    std::vector<Q> x;
    int m = 0;
    PointValue c_m;
};

// Pointwise consistency of the local operators with the rational representation of C_m.
// `level` in [0, n-1] restricts to the identity that introduces C_level, n to the closing
// identity for the top bubbles, -1 runs all of them.
void check_oracle(const Transform& tr, const Decomposition& D, int points, uint64_t seed, CheckList& out,
                  int level = -1, std::vector<OracleSample>* samples = nullptr);

struct VerifyOptions {
    bool full = true;
    int points = 10;
    uint64_t seed = 1;
};

struct VerifyResult {
    CheckList checks;
    std::vector<std::string> notes;
    std::string max_w, max_z;
};

VerifyResult verify_form(const WeightSystem& ws, const PiecewiseForm& u, const VerifyOptions& opt);

}  // namespace bubblex

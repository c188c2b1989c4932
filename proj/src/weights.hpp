#pragma once

#include <map>
#include <string>
#include <vector>

#include "chains.hpp"
#include "piecewise.hpp"

namespace bubblex {

// mu_e(f) = sum a[j][e][e'] phi_{e'} and, on the star of f,
// beta_e(f) = sum b[j][e][e'] phi_{e'}, for e in Delta_j(f*).
struct LinkFunctions {
    Simplex f;
    int top = 0;
    std::vector<std::map<Simplex, Chain>> a;
    std::vector<std::map<Simplex, Chain>> b;
    std::vector<PotentialBranch> branch;  // branch[j] was used to obtain a[j+1]
};

LinkFunctions build_mu_beta(const Mesh& mesh, const Simplex& f);

struct WeightSystem {
    MeshPtr mesh;
    std::map<Simplex, LinkFunctions> links;  // every f in Delta_0 .. Delta_{n-1}
    PairFamily<Cochain> w;
    PairFamily<Cochain> z;
    std::map<Simplex, Cochain> zavg;

    const LinkFunctions& link(const Simplex& f) const;
    const Cochain& weight_z(const Simplex& e, const Simplex& f) const;
    const Cochain& weight_w(const Simplex& e, const Simplex& f) const;
    const Cochain& average(const Simplex& f) const;
};

WeightSystem build_weight_system(const MeshPtr& mesh);

// mu_e(f) as a Whitney combination of degree j-1 (j >= 1).
Cochain mu_cochain(const WeightSystem& ws, const Simplex& e, const Simplex& f);
// beta_e(f) on the star of f as a Whitney combination.
Cochain beta_cochain(const WeightSystem& ws, const Simplex& e, const Simplex& f);
// beta_e(f) on the whole domain from rho_f d mu - j d rho_f ^ mu + (-1)^j phi_e.
PiecewiseForm beta_global(const WeightSystem& ws, const Simplex& e, const Simplex& f);
// psi_{e,g}(f) for g a face of f.
Cochain psi(const WeightSystem& ws, const Simplex& e, const Simplex& g, const Simplex& f);

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string witness;
    long count = 0;  // instances checked
};

struct CertificateReport {
    std::vector<CheckResult> checks;
    std::string max_w;
    std::string max_z;
    std::vector<std::string> notes;
    bool all_passed() const;
};

CertificateReport certify_weight_system(const WeightSystem& ws);

}  // namespace bubblex

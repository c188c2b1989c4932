#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "operators.hpp"

namespace bubblex {

// Which of the two families a local operator K_{m,f} belongs to.
enum class KBranch { SameLevel, LowerLevel };  // f in Delta_m, f in Delta_{m-1}

struct KKey {
    int m;
    KBranch branch;
    Simplex f;
    bool operator<(const KKey& o) const {
        return std::tie(m, branch, f) < std::tie(o.m, o.branch, o.f);
    }
};

struct Decomposition {
    PiecewiseForm u;
    PiecewiseForm W;
    std::map<Simplex, PiecewiseForm> bubbles;  // every simplex of dimension 0..n
    std::map<KKey, PiecewiseForm> k_table;
    bool residual_zero = false;
    bool trace_zero = false;
    Simplex trace_witness;  // first face with nonzero trace, if any
};

class Transform {
  public:
    explicit Transform(const WeightSystem& ws) : ws_(ws) {}

    const WeightSystem& weights() const { return ws_; }

    PiecewiseForm w_part(const PiecewiseForm& u) const;
    // K_{m,f} for f in Delta_m (SameLevel, 0 <= m <= n-1) or f in Delta_{m-1}
    // (LowerLevel, 1 <= m <= n-1). `rdu` reduces du and may be null when k = n.
    PiecewiseForm k_op(const Reducer& ru, const Reducer* rdu, int m, KBranch branch, const Simplex& f) const;
    Decomposition decompose(const PiecewiseForm& u) const;

  private:
    const WeightSystem& ws_;
};

// Constant alternating coefficients keyed by basis bitmask.
using PointValue = std::map<uint32_t, Q>;

PointValue point_eval(const PiecewiseForm& u, const std::vector<Q>& x);
// C_m u at x from its rational representation, with exact division by rho_g(x).
PointValue c_m_point_eval(const Reducer& ru, int m, const std::vector<Q>& x);

struct StabilityReport {
    int k = 0, degree = 0, trials = 0;
    uint64_t seed = 0;
    std::vector<double> bubble_ratio;
    std::vector<double> w_ratio;
    double bubble_max = 0, bubble_median = 0, w_max = 0, w_median = 0;
};

struct StabilityRatios {
    Q bubbles;  // sum over f of |B_f u|^2, over |u|^2
    Q w;        // |W u|^2 over |u|^2
};
// Requires u != 0.
StabilityRatios stability_ratios(const Transform& tr, const PiecewiseForm& u);

StabilityReport stability_report(const WeightSystem& ws, int k, int r, int trials, uint64_t seed);

}  // namespace bubblex

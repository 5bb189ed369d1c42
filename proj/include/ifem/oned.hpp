#pragma once

#include "ifem/assembly.hpp"
#include "ifem/enrichment.hpp"

namespace ifem {

/// -(a u')' = 1 on (0,1), u(0) = 0, a u'(1) = 2, with a jumping from a0 to
/// a1 at gamma.  Small dense companion of the 2-D solver stack.
struct OneDProblem {
    double gamma = 0.5;
    double a0 = 1.0, a1 = 10.0;
    int m = 10;
    double R = 0.2;  // geometric enrichment radius
};

struct OneDResult {
    BlockSystem sys;   // node 0 pinned
    VecX c;            // direct solution of the unscaled system
    double epsilon = 0.0;
    double exact_energy2 = 0.0, discrete_energy2 = 0.0;
    double kappa_full = 0.0, kappa22 = 0.0;
    double theta_deg = 90.0;
    int n_enr = 0;
    bool enrichment_dropped = false;  // safety check fired or gamma on a node
};

/// Exact solution: a u' = 3 - x, integrated piecewise.
double oned_exact_u(const OneDProblem& p, double x);
double oned_exact_energy2(const OneDProblem& p);

OneDResult solve_1d(const OneDProblem& p, Scheme scheme);

}  // namespace ifem

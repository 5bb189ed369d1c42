#pragma once

#include <string>
#include <utility>

#include "ifem/assembly.hpp"
#include "ifem/manufactured.hpp"

namespace ifem {

struct ConditioningReport {
    double kappa = 0.0;
    double lambda_max = 0.0, lambda_min = 0.0;
    std::string method;        // "dense" or "iterative"
    bool converged = true;
    bool rank_deficient = false;  // lambda_min below 1e-14 * lambda_max
};

/// kappa_2 = lambda_max / lambda_min of an SPD matrix.  Dense
/// eigendecomposition up to n = 5000, power + inverse-power iteration beyond.
ConditioningReport condition_number(const SpMat& A);

struct AngleReport {
    double theta_deg = 90.0;
    double lambda_max = 0.0;  // cos^2(theta)
    int iterations = 0;
    bool converged = true;
};

/// Smallest principal angle between the FEM and enrichment subspaces in the
/// energy inner product: lambda_max of the pencil (A21 A11^-1 A12, A22) by
/// power iteration with A22-normalization, on the unscaled blocks.
AngleReport subspace_angle(const BlockSystem& sys);

struct ErrorReport {
    double epsilon = 0.0;
    double exact_energy2 = 0.0;
    double discrete_energy2 = 0.0;
    bool negative_flagged = false;  // discrete energy above exact beyond 1e-12
};

/// epsilon = |  ||u||_E^2 - c^T A_hat c |^(1/2); for the circle problem the
/// discrete term is the perturbed energy, which is what the assembled matrix
/// integrates by construction.
ErrorReport discretization_error(double exact_energy2, const BlockSystem& sys, const VecX& c);

/// || u - u_h ||_E^2 by composite midpoint quadrature on a 4^r uniform
/// refinement of every sub-triangle (r = refine_cut on cut elements,
/// refine_uncut elsewhere), coefficient and side taken from the true
/// interface.  Slow oracle path.
double true_error_squared(const UniformMesh& mesh, const CutClassification& cut,
                          const SubTriangulation& sub, const EnrichedBasis& basis,
                          const DofMap& dofs, const VecX& c, const ManufacturedSolution& u,
                          int refine_cut = 4, int refine_uncut = 2);

/// | ||u - u_h||_E^2 - | ||u||_E^2 - ||u_h||^2 | |, the quantity whose decay
/// order separates the perturbed from the unperturbed energy identity.
double perturbation_gap(double true_err2, double exact_energy2, double discrete_energy2);

/// Least-squares slope of log(value) against log(h).
double fit_rate(const std::vector<std::pair<double, double>>& h_value);

}  // namespace ifem

#pragma once

#include <functional>
#include <memory>

#include "ifem/assembly.hpp"

namespace ifem {

using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Nested FEM hierarchy from m = 1 up to m = 2^L with the (0,0) node pinned:
/// the finest level carries the assembled, diagonally scaled FEM operator and
/// coarse levels its Galerkin restrictions P^T A P.
struct MeshHierarchy {
    struct Level {
        UniformMesh mesh;
        SpMat A;        // scaled
        SpMatRow Arow;  // same matrix, row-major for Gauss-Seidel sweeps
        VecX D;         // c_hat = D x
        SpMat P;             // prolongation from the previous level (pinned dofs)
        SpMat P_full;        // same on the full node set, rows sum to 1
    };
    std::vector<Level> levels;

    const Level& finest() const { return levels.back(); }

    /// m must be a power of two.
    static MeshHierarchy build(int m, const InterfaceGeometry& geom, double a0, double a1);
};

struct RelaxConfig {
    bool adaptive = true;  // residual-halving rule; otherwise fixed sweep count
    int fixed_sweeps = 2;
    int max_sweeps = 100;
};

/// Forward Gauss-Seidel sweeps on A x = b in place; under the adaptive rule
/// sweeps continue while each one at least halves the l2 residual.  Returns
/// the sweep count.
int gauss_seidel(const SpMatRow& A, const VecX& b, VecX& x, const RelaxConfig& cfg = {});

void v_cycle(const MeshHierarchy& hier, int level, const VecX& rhs, VecX& x,
             const RelaxConfig& cfg = {});

/// Full multigrid pass used as a (generally nonlinear) preconditioner:
/// restrict the input all the way down, solve the coarsest level exactly,
/// then prolong and apply one V-cycle per level upward.
VecX fmg(const MeshHierarchy& hier, const VecX& rhs, const RelaxConfig& cfg = {});

struct PcgResult {
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
    bool breakdown = false;
};

/// Flexible (Polak-Ribiere) preconditioned CG; stop(residual_l2, iteration)
/// is checked after each update, and at least one iteration runs unless the
/// initial residual already passes.
PcgResult pcg(const std::function<VecX(const VecX&)>& apply_A,
              const std::function<VecX(const VecX&)>& apply_M, const VecX& b, VecX& x,
              const std::function<bool(double, int)>& stop, int max_iter = 5000);

struct StoppingConfig {
    double k = 100.0;   // outer safety factor
    double kprime = 4.0;
    RelaxConfig relax;
};

/// e = ||r||_2 / h, the effective residual estimator for the scaled FEM block.
inline double estimator_fem(const VecX& r, double h) { return r.norm() / h; }

struct OuterTrace {
    int outer = 0;
    double estimate = 0.0;  // e^i (inf until defined)
    int inner_fem = 0, inner_enr = 0;
    double seconds = 0.0;
};

struct SolveReport {
    VecX x;          // scaled coordinates
    VecX c;          // unscaled coefficients D x
    int outer = 0;
    int inner_fem = 0, inner_enr = 0;
    double seconds = 0.0;
    double final_estimate = 0.0;
    bool converged = false;
    bool estimator_stalled = false;  // undefined Richardson estimate along the way
    std::vector<OuterTrace> trace;
};

/// Algorithm for the FEM system: FMG-preconditioned CG, stop when
/// ||r||/h < h^(1/2) / k.
SolveReport solve_fem(const ScaledSystem& sys, const MeshHierarchy& hier, double h,
                      const StoppingConfig& cfg = {});

/// Block Gauss-Seidel between the FEM and enrichment blocks (outer), FMG-CG
/// on A11 and plain CG on A22 (inner), Richardson outer estimator, stop when
/// e^i < h / k.
SolveReport solve_enriched(const ScaledSystem& sys, const MeshHierarchy& hier, double h,
                           const StoppingConfig& cfg = {});

/// e = 1 / (1/||w_i - w_{i-1}|| - 1/||w_{i-1} - w_{i-2}||) on energy norms of
/// the last two differences; NaN when the sequence does not contract.
double richardson_outer_estimator(double diff_latest, double diff_previous);

struct Extrapolation {
    double eta = 0.0;
    double error_estimate = 0.0;  // |eta^2 - ||v_h||^2|^(1/2)
    bool monotonicity_flag = false;
};

/// Richardson extrapolation of the energy norm in h: C = (n_h - n_2h) /
/// ((2^p - 1) h^p), eta = n_h + C h^p.
Extrapolation extrapolated_error(double norm_h, double norm_2h, double h, double p);

struct ErrorDecomposition {
    double epsilon = 0.0;   // discretization error
    double delta = 0.0;     // truncation (iteration) error
    double epsilon_hat = 0.0;
    double ratio = 1.0;     // i^h
};

ErrorDecomposition total_error_decomposition(double epsilon_h, double delta);

}  // namespace ifem

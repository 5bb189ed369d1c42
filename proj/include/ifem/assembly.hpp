#pragma once

#include <functional>
#include <iosfwd>

#include <Eigen/Sparse>

#include "ifem/enrichment.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

using SpMat = Eigen::SparseMatrix<double>;
using VecX = Eigen::VectorXd;

struct DofMap {
    std::vector<int> fem_dof;  // per mesh node, -1 at the pinned node (0,0)
    std::vector<int> enr_dof;  // per mesh node, -1 if not enriched
    std::vector<int> enr_nodes;  // node id per enrichment dof
    int n1 = 0, n2 = 0;
};

/// [[A11, A12], [A12^T, A22]] c = [f1; f2], FEM block first.  With no
/// enrichment A12/A22/f2 are empty.
struct BlockSystem {
    DofMap dofs;
    SpMat A11, A12, A22;
    VecX f1, f2;

    int size() const { return dofs.n1 + dofs.n2; }
    SpMat full() const;
    VecX rhs() const;
};

/// D A_hat D with unit diagonal; c_hat = D x.
struct ScaledSystem {
    SpMat A11, A12, A22, A;
    VecX f1, f2, f;
    VecX D;
    int n1 = 0, n2 = 0;

    VecX unscale(const VecX& x) const { return D.cwiseProduct(x); }
};

/// Local 3x3 blocks for one element, FEM rows/cols ordered like the element
/// vertex list.  K12/K22 columns for non-enriched vertices are ignored at
/// accumulation time.
struct ElementMatrices {
    Eigen::Matrix3d K11 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d K12 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d K22 = Eigen::Matrix3d::Zero();
};

/// Per-element stiffness kernel; the parallel path distributes elements over
/// OpenMP threads and is bitwise identical to the serial one.
std::vector<ElementMatrices> element_matrices(const UniformMesh& mesh, const SubTriangulation& sub,
                                              const EnrichedBasis& basis, double a0, double a1,
                                              bool parallel);

BlockSystem assemble(const UniformMesh& mesh, const SubTriangulation& sub,
                     const EnrichedBasis& basis, double a0, double a1, bool parallel = true);

/// Neumann load: 8-point Gauss per boundary edge, split at interface
/// crossings; g_N(point, outward normal).
void assemble_load(const UniformMesh& mesh, const CutClassification& cut,
                   const EnrichedBasis& basis,
                   const std::function<double(const Vec2&, const Vec2&)>& g_N, BlockSystem& sys);

ScaledSystem scale(const BlockSystem& sys);

/// Coordinate text format, 1-based indices, one "row col value" per line.
void export_matrix(const SpMat& A, std::ostream& os);

/// Energy product x^T A_hat y evaluated through the blocks.
double block_energy(const BlockSystem& sys, const VecX& x, const VecX& y);

}  // namespace ifem

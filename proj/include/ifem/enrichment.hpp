#pragma once

#include <vector>

#include "ifem/mesh.hpp"

namespace ifem {

enum class Scheme { None, Topological, Geometric, MGfem, Sgfem };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
/// A priori energy-norm convergence order: 1/2 for FEM/Topological, 1 otherwise.
double scheme_order(Scheme s);

/// Nodal values of the piecewise-linear distance field w* on the vertices of
/// the sub-triangulated mesh (exact distance at every vertex; linear in
/// between, which is exact on each side of a straight interface).
std::vector<double> distance_field(const InterfaceGeometry& geom, const SubTriangulation& sub);

/// Node set R^h for a scheme.  Geometric uses the exact distance test
/// dist(x_i, Gamma) <= R; Topological/Sgfem take the vertices of cut
/// elements; MGfem additionally takes every node sharing an element with one
/// of those.
std::vector<int> enriched_nodes(Scheme scheme, const UniformMesh& mesh,
                                const InterfaceGeometry& geom, const CutClassification& cut,
                                double R);

/// Nodes closer to the interface than 1e-14*h lose their enrichment DOF.
bool keep_enriched_node(int node, const UniformMesh& mesh, const InterfaceGeometry& geom);

struct EnrichedBasis {
    Scheme scheme = Scheme::None;
    std::vector<int> nodes;       // enriched node ids, sorted, after the safety check
    std::vector<double> w;        // per sub-triangulation vertex
    std::vector<char> is_enriched;  // per mesh node
};

EnrichedBasis build_enrichment(Scheme scheme, const UniformMesh& mesh,
                               const InterfaceGeometry& geom, const CutClassification& cut,
                               const SubTriangulation& sub, double R);

}  // namespace ifem

#include "ifem/enrichment.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ifem {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::None: return "fem";
        case Scheme::Topological: return "topological";
        case Scheme::Geometric: return "geometric";
        case Scheme::MGfem: return "mgfem";
        case Scheme::Sgfem: return "sgfem";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::None, Scheme::Topological, Scheme::Geometric, Scheme::MGfem,
                     Scheme::Sgfem})
        if (name == scheme_name(s)) return s;
    throw std::invalid_argument("unknown scheme: " + name);
}

double scheme_order(Scheme s) {
    return (s == Scheme::None || s == Scheme::Topological) ? 0.5 : 1.0;
}

std::vector<double> distance_field(const InterfaceGeometry& geom, const SubTriangulation& sub) {
    std::vector<double> w(sub.points.size());
    for (size_t v = 0; v < sub.points.size(); ++v) w[v] = geom.distance(sub.points[v]);
    return w;
}

std::vector<int> enriched_nodes(Scheme scheme, const UniformMesh& mesh,
                                const InterfaceGeometry& geom, const CutClassification& cut,
                                double R) {
    std::set<int> nodes;
    switch (scheme) {
        case Scheme::None:
            break;
        case Scheme::Geometric:
            if (!(R > 0.0)) throw std::invalid_argument("geometric enrichment needs R > 0");
            for (int v = 0; v < mesh.node_count(); ++v)
                if (geom.distance(mesh.node(v)) <= R) nodes.insert(v);
            break;
        case Scheme::Topological:
        case Scheme::Sgfem:
            for (int e : cut.cut_elements)
                for (int v : mesh.elements[e]) nodes.insert(v);
            break;
        case Scheme::MGfem: {
            std::set<int> topo;
            for (int e : cut.cut_elements)
                for (int v : mesh.elements[e]) topo.insert(v);
            for (int v : topo)
                for (int e : mesh.patches[v])
                    for (int v2 : mesh.elements[e]) nodes.insert(v2);
            break;
        }
    }
    return {nodes.begin(), nodes.end()};
}

bool keep_enriched_node(int node, const UniformMesh& mesh, const InterfaceGeometry& geom) {
    return geom.distance(mesh.node(node)) > 1e-14 * mesh.h;
}

EnrichedBasis build_enrichment(Scheme scheme, const UniformMesh& mesh,
                               const InterfaceGeometry& geom, const CutClassification& cut,
                               const SubTriangulation& sub, double R) {
    EnrichedBasis basis;
    basis.scheme = scheme;
    if (scheme == Scheme::None) return basis;

    for (int v : enriched_nodes(scheme, mesh, geom, cut, R))
        if (keep_enriched_node(v, mesh, geom)) basis.nodes.push_back(v);
    basis.is_enriched.assign(mesh.node_count(), 0);
    for (int v : basis.nodes) basis.is_enriched[v] = 1;

    const std::vector<double> wstar = distance_field(geom, sub);
    const int nn = mesh.node_count();

    switch (scheme) {
        case Scheme::Topological:
        case Scheme::Geometric:
            basis.w = wstar;
            break;
        case Scheme::MGfem: {
            // w = w* on cut elements and at their vertices, zero at all other
            // nodes, linear on uncut elements
            std::vector<char> touches(sub.points.size(), 0);
            for (int e : cut.cut_elements)
                for (const auto& t : sub.per_element[e])
                    for (int v : t.v) touches[v] = 1;
            basis.w.assign(sub.points.size(), 0.0);
            for (size_t v = 0; v < sub.points.size(); ++v)
                if (touches[v]) basis.w[v] = wstar[v];
            break;
        }
        case Scheme::Sgfem: {
            // w = w* - I_h w*: vanishes at mesh nodes, and on uncut elements
            // w* is already linear so w vanishes there entirely
            basis.w.assign(sub.points.size(), 0.0);
            for (size_t k = 0; k < cut.edge_points.size(); ++k) {
                const auto& ep = cut.edge_points[k];
                const int v = nn + static_cast<int>(k);
                const double interp = (1.0 - ep.t) * wstar[ep.a] + ep.t * wstar[ep.b];
                basis.w[v] = wstar[v] - interp;
            }
            break;
        }
        default:
            break;
    }
    return basis;
}

}  // namespace ifem

#include "ifem/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "ifem/quadrature.hpp"

namespace ifem {

namespace {

std::array<Vec2, 3> hat_gradients(const Vec2& q0, const Vec2& q1, const Vec2& q2, double area) {
    const double s = 1.0 / (2.0 * area);
    return {Vec2{(q1.y() - q2.y()) * s, (q2.x() - q1.x()) * s},
            Vec2{(q2.y() - q0.y()) * s, (q0.x() - q2.x()) * s},
            Vec2{(q0.y() - q1.y()) * s, (q1.x() - q0.x()) * s}};
}

ElementMatrices element_kernel(const UniformMesh& mesh, const SubTriangulation& sub,
                               const EnrichedBasis& basis, double a0, double a1, int e) {
    ElementMatrices out;
    const auto q = mesh.vertices(e);
    const double elem_area = triangle_area(q[0], q[1], q[2]);
    const auto gradN = hat_gradients(q[0], q[1], q[2], elem_area);
    const bool enriched = basis.scheme != Scheme::None;

    for (const auto& t : sub.per_element[e]) {
        const double a = t.side == 0 ? a0 : a1;
        const Vec2 p0 = sub.points[t.v[0]], p1 = sub.points[t.v[1]], p2 = sub.points[t.v[2]];

        // FEM x FEM: constant gradients, one-point quadrature is exact
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.K11(i, j) += a * t.area * gradN[i].dot(gradN[j]);

        if (!enriched) continue;

        const double w0 = basis.w[t.v[0]], w1 = basis.w[t.v[1]], w2 = basis.w[t.v[2]];
        if (w0 == 0.0 && w1 == 0.0 && w2 == 0.0) continue;
        const auto gradL = hat_gradients(p0, p1, p2, t.area);
        const Vec2 gradw = w0 * gradL[0] + w1 * gradL[1] + w2 * gradL[2];

        // edge midpoints of the sub-triangle: exact for quadratic integrands
        const Vec2 mids[3] = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
        const double wq = t.area / 3.0;
        for (int qp = 0; qp < 3; ++qp) {
            const Vec2& x = mids[qp];
            // linear interpolants at the quadrature point
            const double lw[3] = {(qp == 0 || qp == 2) ? 0.5 : 0.0,
                                  (qp == 0 || qp == 1) ? 0.5 : 0.0,
                                  (qp == 1 || qp == 2) ? 0.5 : 0.0};
            const double w = w0 * lw[0] + w1 * lw[1] + w2 * lw[2];
            double N[3];
            Vec2 gphi[3];
            for (int i = 0; i < 3; ++i) {
                N[i] = triangle_area(x, q[(i + 1) % 3], q[(i + 2) % 3]) / elem_area;
                gphi[i] = w * gradN[i] + N[i] * gradw;
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    out.K12(i, j) += a * wq * gradN[i].dot(gphi[j]);
                    out.K22(i, j) += a * wq * gphi[i].dot(gphi[j]);
                }
        }
    }
    return out;
}

}  // namespace

std::vector<ElementMatrices> element_matrices(const UniformMesh& mesh, const SubTriangulation& sub,
                                              const EnrichedBasis& basis, double a0, double a1,
                                              bool parallel) {
    std::vector<ElementMatrices> locals(mesh.element_count());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < mesh.element_count(); ++e)
            locals[e] = element_kernel(mesh, sub, basis, a0, a1, e);
    } else {
        for (int e = 0; e < mesh.element_count(); ++e)
            locals[e] = element_kernel(mesh, sub, basis, a0, a1, e);
    }
    return locals;
}

BlockSystem assemble(const UniformMesh& mesh, const SubTriangulation& sub,
                     const EnrichedBasis& basis, double a0, double a1, bool parallel) {
    if (!(a0 > 0.0) || !(a1 > 0.0)) throw std::invalid_argument("coefficients must be positive");

    const auto locals = element_matrices(mesh, sub, basis, a0, a1, parallel);

    BlockSystem sys;
    DofMap& dofs = sys.dofs;
    const int nn = mesh.node_count();
    dofs.fem_dof.assign(nn, -1);
    const int pinned = mesh.node_id(0, 0);
    for (int v = 0; v < nn; ++v)
        if (v != pinned) dofs.fem_dof[v] = dofs.n1++;

    // candidate enrichment dofs; drop any whose A22 diagonal vanishes
    std::vector<double> diag22(basis.nodes.size(), 0.0);
    std::vector<int> cand(nn, -1);
    for (size_t k = 0; k < basis.nodes.size(); ++k) cand[basis.nodes[k]] = static_cast<int>(k);
    for (int e = 0; e < mesh.element_count(); ++e)
        for (int i = 0; i < 3; ++i) {
            const int c = cand[mesh.elements[e][i]];
            if (c >= 0) diag22[c] += locals[e].K22(i, i);
        }
    dofs.enr_dof.assign(nn, -1);
    for (size_t k = 0; k < basis.nodes.size(); ++k)
        if (diag22[k] > 0.0) {
            dofs.enr_dof[basis.nodes[k]] = dofs.n2++;
            dofs.enr_nodes.push_back(basis.nodes[k]);
        }

    std::vector<Eigen::Triplet<double>> t11, t12, t22;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& K = locals[e];
        for (int i = 0; i < 3; ++i) {
            const int r1 = dofs.fem_dof[el[i]], r2 = dofs.enr_dof[el[i]];
            for (int j = 0; j < 3; ++j) {
                const int c1 = dofs.fem_dof[el[j]], c2 = dofs.enr_dof[el[j]];
                if (r1 >= 0 && c1 >= 0) t11.emplace_back(r1, c1, K.K11(i, j));
                if (r1 >= 0 && c2 >= 0) t12.emplace_back(r1, c2, K.K12(i, j));
                if (r2 >= 0 && c2 >= 0) t22.emplace_back(r2, c2, K.K22(i, j));
            }
        }
    }
    sys.A11.resize(dofs.n1, dofs.n1);
    sys.A11.setFromTriplets(t11.begin(), t11.end());
    sys.A12.resize(dofs.n1, dofs.n2);
    sys.A12.setFromTriplets(t12.begin(), t12.end());
    sys.A22.resize(dofs.n2, dofs.n2);
    sys.A22.setFromTriplets(t22.begin(), t22.end());
    sys.f1 = VecX::Zero(dofs.n1);
    sys.f2 = VecX::Zero(dofs.n2);
    return sys;
}

void assemble_load(const UniformMesh& mesh, const CutClassification& cut,
                   const EnrichedBasis& basis,
                   const std::function<double(const Vec2&, const Vec2&)>& g_N, BlockSystem& sys) {
    const GaussRule& gl = gauss_legendre(8);
    const int m = mesh.m;
    const double h = mesh.h;
    const bool enriched = basis.scheme != Scheme::None;

    // mesh edge (a,b) -> crossing point on it, if any
    std::unordered_map<int64_t, int> crossing;
    auto key = [m](int a, int b) {
        if (a > b) std::swap(a, b);
        return static_cast<int64_t>(a) * (m + 1) * (m + 1) + b;
    };
    for (size_t k = 0; k < cut.edge_points.size(); ++k)
        crossing[key(cut.edge_points[k].a, cut.edge_points[k].b)] = static_cast<int>(k);

    sys.f1.setZero();
    sys.f2.setZero();

    auto do_edge = [&](int na, int nb, const Vec2& normal) {
        const Vec2 pa = mesh.node(na), pb = mesh.node(nb);
        // breakpoints: endpoints plus the interface crossing, as (param, vertex)
        std::vector<std::pair<double, int>> pts = {{0.0, na}, {1.0, nb}};
        auto it = crossing.find(key(na, nb));
        if (it != crossing.end()) {
            const auto& ep = cut.edge_points[it->second];
            const double t = ep.a == na ? ep.t : 1.0 - ep.t;
            pts.insert(pts.begin() + 1, {t, ep.vertex});
        }
        for (size_t s = 0; s + 1 < pts.size(); ++s) {
            const double t0 = pts[s].first, t1 = pts[s + 1].first;
            const double wa = enriched ? basis.w[pts[s].second] : 0.0;
            const double wb = enriched ? basis.w[pts[s + 1].second] : 0.0;
            for (int q = 0; q < 8; ++q) {
                const double t = t0 + (t1 - t0) * gl.x[q];
                const Vec2 x = (1.0 - t) * pa + t * pb;
                const double g = g_N(x, normal) * gl.w[q] * (t1 - t0) * h;
                const double Na = 1.0 - t, Nb = t;
                const int fa = sys.dofs.fem_dof[na], fb = sys.dofs.fem_dof[nb];
                if (fa >= 0) sys.f1[fa] += g * Na;
                if (fb >= 0) sys.f1[fb] += g * Nb;
                if (enriched) {
                    const double lam = (t - t0) / (t1 - t0);
                    const double w = (1.0 - lam) * wa + lam * wb;
                    const int ea = sys.dofs.enr_dof[na], eb = sys.dofs.enr_dof[nb];
                    if (ea >= 0) sys.f2[ea] += g * w * Na;
                    if (eb >= 0) sys.f2[eb] += g * w * Nb;
                }
            }
        }
    };

    for (int i = 0; i < m; ++i) {
        do_edge(mesh.node_id(i, 0), mesh.node_id(i + 1, 0), {0.0, -1.0});
        do_edge(mesh.node_id(i, m), mesh.node_id(i + 1, m), {0.0, 1.0});
        do_edge(mesh.node_id(0, i), mesh.node_id(0, i + 1), {-1.0, 0.0});
        do_edge(mesh.node_id(m, i), mesh.node_id(m, i + 1), {1.0, 0.0});
    }
}

SpMat BlockSystem::full() const {
    const int n = size();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A11.nonZeros() + 2 * A12.nonZeros() + A22.nonZeros());
    for (int k = 0; k < A11.outerSize(); ++k)
        for (SpMat::InnerIterator it(A11, k); it; ++it)
            t.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < A12.outerSize(); ++k)
        for (SpMat::InnerIterator it(A12, k); it; ++it) {
            t.emplace_back(it.row(), dofs.n1 + it.col(), it.value());
            t.emplace_back(dofs.n1 + it.col(), it.row(), it.value());
        }
    for (int k = 0; k < A22.outerSize(); ++k)
        for (SpMat::InnerIterator it(A22, k); it; ++it)
            t.emplace_back(dofs.n1 + it.row(), dofs.n1 + it.col(), it.value());
    SpMat A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

VecX BlockSystem::rhs() const {
    VecX f(size());
    f.head(dofs.n1) = f1;
    f.tail(dofs.n2) = f2;
    return f;
}

ScaledSystem scale(const BlockSystem& sys) {
    ScaledSystem out;
    out.n1 = sys.dofs.n1;
    out.n2 = sys.dofs.n2;
    const SpMat A = sys.full();
    out.D.resize(A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        const double d = A.coeff(i, i);
        if (!(d > 0.0)) {
            const bool fem = i < out.n1;
            throw std::runtime_error("non-positive diagonal at " +
                                     std::string(fem ? "fem" : "enrichment") + " dof " +
                                     std::to_string(fem ? i : i - out.n1));
        }
        out.D[i] = 1.0 / std::sqrt(d);
    }
    auto scaled = [&](const SpMat& B, int roff, int coff) {
        SpMat S = B;
        for (int k = 0; k < S.outerSize(); ++k)
            for (SpMat::InnerIterator it(S, k); it; ++it)
                it.valueRef() *= out.D[roff + it.row()] * out.D[coff + it.col()];
        return S;
    };
    out.A11 = scaled(sys.A11, 0, 0);
    out.A12 = scaled(sys.A12, 0, out.n1);
    out.A22 = scaled(sys.A22, out.n1, out.n1);
    out.A = scaled(A, 0, 0);
    out.f = out.D.cwiseProduct(sys.rhs());
    out.f1 = out.f.head(out.n1);
    out.f2 = out.f.tail(out.n2);
    return out;
}

void export_matrix(const SpMat& A, std::ostream& os) {
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

double block_energy(const BlockSystem& sys, const VecX& x, const VecX& y) {
    const int n1 = sys.dofs.n1;
    const VecX x1 = x.head(n1), y1 = y.head(n1);
    double e = x1.dot(sys.A11 * y1);
    if (sys.dofs.n2 > 0) {
        const VecX x2 = x.tail(sys.dofs.n2), y2 = y.tail(sys.dofs.n2);
        e += x1.dot(sys.A12 * y2) + y1.dot(sys.A12 * x2) + x2.dot(sys.A22 * y2);
    }
    return e;
}

}  // namespace ifem

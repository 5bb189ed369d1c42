#include "ifem/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace ifem {

ConditioningReport condition_number(const SpMat& A) {
    ConditioningReport rep;
    const int n = static_cast<int>(A.rows());
    if (n == 0) throw std::invalid_argument("empty matrix");

    if (n <= 5000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A),
                                                          Eigen::EigenvaluesOnly);
        rep.method = "dense";
        rep.lambda_max = es.eigenvalues().maxCoeff();
        rep.lambda_min = es.eigenvalues().minCoeff();
    } else {
        rep.method = "iterative";
        VecX v = VecX::Ones(n).normalized();
        double lam = 0.0;
        rep.converged = false;
        for (int it = 0; it < 2000; ++it) {
            const VecX Av = A * v;
            const double nl = v.dot(Av);
            v = Av.normalized();
            if (it > 2 && std::abs(nl - lam) <= 1e-12 * std::abs(nl)) {
                lam = nl;
                rep.converged = true;
                break;
            }
            lam = nl;
        }
        rep.lambda_max = lam;

        Eigen::SimplicialLLT<SpMat> llt(A);
        if (llt.info() != Eigen::Success) throw std::runtime_error("matrix not SPD");
        v = VecX::Ones(n).normalized();
        double mu = 0.0;  // largest eigenvalue of A^-1
        bool conv_min = false;
        for (int it = 0; it < 2000; ++it) {
            const VecX w = llt.solve(v);
            const double nm = v.dot(w);
            v = w.normalized();
            if (it > 2 && std::abs(nm - mu) <= 1e-12 * std::abs(nm)) {
                mu = nm;
                conv_min = true;
                break;
            }
            mu = nm;
        }
        rep.converged = rep.converged && conv_min;
        rep.lambda_min = 1.0 / mu;
    }
    rep.rank_deficient = rep.lambda_min < 1e-14 * rep.lambda_max;
    rep.kappa = rep.lambda_max / rep.lambda_min;
    return rep;
}

AngleReport subspace_angle(const BlockSystem& sys) {
    if (sys.dofs.n2 == 0) throw std::invalid_argument("no enrichment block");
    AngleReport rep;

    Eigen::SimplicialLLT<SpMat> llt11(sys.A11);
    if (llt11.info() != Eigen::Success) throw std::runtime_error("A11 not SPD");
    Eigen::SimplicialLLT<SpMat> llt22(sys.A22);
    if (llt22.info() != Eigen::Success)
        throw std::runtime_error("A22 singular after safety-check removal");

    auto apply_M = [&](const VecX& v) -> VecX {
        return sys.A12.transpose() * llt11.solve(sys.A12 * v);
    };

    VecX v = VecX::Ones(sys.dofs.n2);
    v /= std::sqrt(v.dot(sys.A22 * v));
    double lam = 0.0;
    rep.converged = false;
    for (int it = 0; it < 500; ++it) {
        const VecX Mv = apply_M(v);
        const double nl = v.dot(Mv);  // Rayleigh quotient, v is B-normalized
        VecX w = llt22.solve(Mv);
        const double bn = std::sqrt(w.dot(sys.A22 * w));
        rep.iterations = it + 1;
        if (bn == 0.0) {
            // A12 annihilates the iterate: the subspaces are B-orthogonal
            lam = 0.0;
            rep.converged = true;
            break;
        }
        v = w / bn;
        if (it > 0 && std::abs(nl - lam) <= 1e-10 * std::max(std::abs(nl), 1e-30)) {
            lam = nl;
            rep.converged = true;
            break;
        }
        lam = nl;
    }
    rep.lambda_max = lam;
    const double clamped = std::min(1.0, std::max(0.0, lam));
    rep.theta_deg = std::acos(std::sqrt(clamped)) * 180.0 / M_PI;
    return rep;
}

ErrorReport discretization_error(double exact_energy2, const BlockSystem& sys, const VecX& c) {
    ErrorReport rep;
    rep.exact_energy2 = exact_energy2;
    rep.discrete_energy2 = block_energy(sys, c, c);
    const double diff = exact_energy2 - rep.discrete_energy2;
    rep.negative_flagged = diff < -1e-12 * std::max(1.0, exact_energy2);
    rep.epsilon = std::sqrt(std::abs(diff));
    return rep;
}

namespace {

std::array<Vec2, 3> hat_gradients(const Vec2& q0, const Vec2& q1, const Vec2& q2, double area) {
    const double s = 1.0 / (2.0 * area);
    return {Vec2{(q1.y() - q2.y()) * s, (q2.x() - q1.x()) * s},
            Vec2{(q2.y() - q0.y()) * s, (q0.x() - q2.x()) * s},
            Vec2{(q0.y() - q1.y()) * s, (q1.x() - q0.x()) * s}};
}

}  // namespace

double true_error_squared(const UniformMesh& mesh, const CutClassification& cut,
                          const SubTriangulation& sub, const EnrichedBasis& basis,
                          const DofMap& dofs, const VecX& c, const ManufacturedSolution& u,
                          int refine_cut, int refine_uncut) {
    const bool enriched = basis.scheme != Scheme::None;
    const InterfaceGeometry& geom = u.geometry();
    double total = 0.0;

    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto q = mesh.vertices(e);
        const double elem_area = triangle_area(q[0], q[1], q[2]);
        const auto gradN = hat_gradients(q[0], q[1], q[2], elem_area);
        const auto& el = mesh.elements[e];

        double c1[3] = {0, 0, 0}, c2[3] = {0, 0, 0};
        bool any_enr = false;
        for (int i = 0; i < 3; ++i) {
            const int f = dofs.fem_dof[el[i]];
            if (f >= 0) c1[i] = c[f];
            if (enriched) {
                const int g = dofs.enr_dof[el[i]];
                if (g >= 0) {
                    c2[i] = c[dofs.n1 + g];
                    any_enr = true;
                }
            }
        }

        const int r = cut.is_cut[e] ? refine_cut : refine_uncut;
        const int nsub = 1 << r;

        for (const auto& t : sub.per_element[e]) {
            const Vec2 p0 = sub.points[t.v[0]], p1 = sub.points[t.v[1]], p2 = sub.points[t.v[2]];
            Vec2 gradw = Vec2::Zero();
            double w0 = 0.0;
            if (any_enr) {
                const auto gradL = hat_gradients(p0, p1, p2, t.area);
                gradw = basis.w[t.v[0]] * gradL[0] + basis.w[t.v[1]] * gradL[1] +
                        basis.w[t.v[2]] * gradL[2];
                w0 = basis.w[t.v[0]];
            }
            const double fine_area = t.area / (nsub * nsub);

            // uniform refinement in barycentric coordinates; 3 midpoints per
            // fine triangle
            for (int i = 0; i < nsub; ++i) {
                for (int j = 0; j < nsub - i; ++j) {
                    const int ups = 1 + (j < nsub - i - 1 ? 1 : 0);
                    for (int o = 0; o < ups; ++o) {
                        Vec2 corners[3];
                        const double s = 1.0 / nsub;
                        if (o == 0) {
                            corners[0] = p0 + (p1 - p0) * (i * s) + (p2 - p0) * (j * s);
                            corners[1] = p0 + (p1 - p0) * ((i + 1) * s) + (p2 - p0) * (j * s);
                            corners[2] = p0 + (p1 - p0) * (i * s) + (p2 - p0) * ((j + 1) * s);
                        } else {
                            corners[0] = p0 + (p1 - p0) * ((i + 1) * s) + (p2 - p0) * (j * s);
                            corners[1] = p0 + (p1 - p0) * ((i + 1) * s) + (p2 - p0) * ((j + 1) * s);
                            corners[2] = p0 + (p1 - p0) * (i * s) + (p2 - p0) * ((j + 1) * s);
                        }
                        for (int k = 0; k < 3; ++k) {
                            const Vec2 x = 0.5 * (corners[k] + corners[(k + 1) % 3]);
                            const double a = geom.side(x) == 0 ? u.a0() : u.a1();
                            Vec2 gh = Vec2::Zero();
                            for (int v = 0; v < 3; ++v) {
                                gh += c1[v] * gradN[v];
                                if (c2[v] != 0.0) {
                                    const double Nv =
                                        triangle_area(x, q[(v + 1) % 3], q[(v + 2) % 3]) /
                                        elem_area;
                                    const double w = w0 + gradw.dot(x - p0);
                                    gh += c2[v] * (w * gradN[v] + Nv * gradw);
                                }
                            }
                            const Vec2 diff = u.grad(x) - gh;
                            total += a * diff.squaredNorm() * fine_area / 3.0;
                        }
                    }
                }
            }
        }
    }
    return total;
}

double perturbation_gap(double true_err2, double exact_energy2, double discrete_energy2) {
    return std::abs(true_err2 - std::abs(exact_energy2 - discrete_energy2));
}

double fit_rate(const std::vector<std::pair<double, double>>& h_value) {
    if (h_value.size() < 2) throw std::invalid_argument("need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [h, v] : h_value) {
        if (!(h > 0.0) || !(v > 0.0)) throw std::invalid_argument("non-positive data in rate fit");
        const double x = std::log(h), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(h_value.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ifem

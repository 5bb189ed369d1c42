#include "ifem/oned.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ifem/diagnostics.hpp"
#include "ifem/quadrature.hpp"

namespace ifem {

double oned_exact_u(const OneDProblem& p, double x) {
    // a u' = 3 - x
    auto seg = [](double s, double t, double a) {
        return (3.0 * (t - s) - 0.5 * (t * t - s * s)) / a;
    };
    if (x <= p.gamma) return seg(0.0, x, p.a0);
    return seg(0.0, p.gamma, p.a0) + seg(p.gamma, x, p.a1);
}

double oned_exact_energy2(const OneDProblem& p) {
    auto seg = [](double s, double t, double a) {
        const double cs = (3.0 - s), ct = (3.0 - t);
        return (cs * cs * cs - ct * ct * ct) / (3.0 * a);
    };
    return seg(0.0, p.gamma, p.a0) + seg(p.gamma, 1.0, p.a1);
}

OneDResult solve_1d(const OneDProblem& p, Scheme scheme) {
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw std::invalid_argument("gamma outside (0,1)");
    if (!(p.a0 > 0.0 && p.a1 > 0.0)) throw std::invalid_argument("coefficients must be positive");

    OneDResult out;
    const int m = p.m;
    const double h = 1.0 / m;
    auto xi = [h](int i) { return i * h; };

    int cut = -1;  // cell containing gamma strictly inside
    for (int k = 0; k < m; ++k)
        if (xi(k) < p.gamma && p.gamma < xi(k + 1)) cut = k;
    const bool on_node = cut < 0;
    const bool too_close =
        cut >= 0 && std::min(p.gamma - xi(cut), xi(cut + 1) - p.gamma) <= 1e-14 * h;

    std::vector<int> enr;
    if (scheme != Scheme::None && !on_node && !too_close) {
        auto add = [&](int i) {
            if (i >= 1 && i <= m) enr.push_back(i);  // node 0 carries the essential BC
        };
        switch (scheme) {
            case Scheme::Geometric:
                for (int i = 0; i <= m; ++i)
                    if (std::abs(xi(i) - p.gamma) <= p.R) add(i);
                break;
            case Scheme::Topological:
            case Scheme::Sgfem:
                add(cut);
                add(cut + 1);
                break;
            case Scheme::MGfem:
                for (int i = cut - 1; i <= cut + 2; ++i) add(i);
                break;
            default:
                break;
        }
    }
    out.enrichment_dropped = scheme != Scheme::None && enr.empty();
    out.n_enr = static_cast<int>(enr.size());

    // piecewise-linear w: nodal values plus its value at gamma
    std::vector<double> wv(m + 1, 0.0);
    double wgamma = 0.0;
    if (!enr.empty()) {
        switch (scheme) {
            case Scheme::Topological:
            case Scheme::Geometric:
                for (int i = 0; i <= m; ++i) wv[i] = std::abs(xi(i) - p.gamma);
                break;
            case Scheme::MGfem:
                wv[cut] = p.gamma - xi(cut);
                wv[cut + 1] = xi(cut + 1) - p.gamma;
                break;
            case Scheme::Sgfem:
                wgamma = -2.0 * (p.gamma - xi(cut)) * (xi(cut + 1) - p.gamma) / h;
                break;
            default:
                break;
        }
    }

    DofMap& dofs = out.sys.dofs;
    dofs.fem_dof.assign(m + 1, -1);
    for (int i = 1; i <= m; ++i) dofs.fem_dof[i] = dofs.n1++;
    dofs.enr_dof.assign(m + 1, -1);
    for (int i : enr) {
        dofs.enr_dof[i] = dofs.n2++;
        dofs.enr_nodes.push_back(i);
    }

    const int n1 = dofs.n1, n2 = dofs.n2;
    Eigen::MatrixXd A11 = Eigen::MatrixXd::Zero(n1, n1);
    Eigen::MatrixXd A12 = Eigen::MatrixXd::Zero(n1, n2);
    Eigen::MatrixXd A22 = Eigen::MatrixXd::Zero(n2, n2);
    out.sys.f1 = VecX::Zero(n1);
    out.sys.f2 = VecX::Zero(n2);

    const GaussRule& g2 = gauss_legendre(2);

    for (int k = 0; k < m; ++k) {
        const double xl = xi(k), xr = xi(k + 1);
        struct Seg {
            double s0, s1, a, w0, w1;
        };
        std::vector<Seg> segs;
        if (k == cut && !enr.empty()) {
            segs.push_back({xl, p.gamma, p.a0, wv[k], wgamma});
            segs.push_back({p.gamma, xr, p.a1, wgamma, wv[k + 1]});
        } else {
            const double a = 0.5 * (xl + xr) < p.gamma ? p.a0 : p.a1;
            segs.push_back({xl, xr, a, wv[k], wv[k + 1]});
        }

        const int nodes[2] = {k, k + 1};
        const double dN[2] = {-1.0 / h, 1.0 / h};
        for (const Seg& s : segs) {
            const double len = s.s1 - s.s0;
            if (len <= 0.0) continue;
            const double dw = (s.w1 - s.w0) / len;
            for (int q = 0; q < 2; ++q) {
                const double x = s.s0 + len * g2.x[q];
                const double wq = len * g2.w[q];
                const double N[2] = {(xr - x) / h, (x - xl) / h};
                const double w = s.w0 + dw * (x - s.s0);
                for (int i = 0; i < 2; ++i) {
                    const int fi = dofs.fem_dof[nodes[i]], ei = dofs.enr_dof[nodes[i]];
                    const double dphi_i = w * dN[i] + N[i] * dw;
                    if (fi >= 0) out.sys.f1[fi] += wq * N[i];  // f = 1
                    if (ei >= 0) out.sys.f2[ei] += wq * w * N[i];
                    for (int j = 0; j < 2; ++j) {
                        const int fj = dofs.fem_dof[nodes[j]], ej = dofs.enr_dof[nodes[j]];
                        const double dphi_j = w * dN[j] + N[j] * dw;
                        if (fi >= 0 && fj >= 0) A11(fi, fj) += s.a * wq * dN[i] * dN[j];
                        if (fi >= 0 && ej >= 0) A12(fi, ej) += s.a * wq * dN[i] * dphi_j;
                        if (ei >= 0 && ej >= 0) A22(ei, ej) += s.a * wq * dphi_i * dphi_j;
                    }
                }
            }
        }
    }

    // Neumann boundary term g v(1), g = 2
    out.sys.f1[dofs.fem_dof[m]] += 2.0;
    if (dofs.enr_dof[m] >= 0) out.sys.f2[dofs.enr_dof[m]] += 2.0 * wv[m];

    out.sys.A11 = A11.sparseView();
    out.sys.A12 = A12.sparseView();
    out.sys.A22 = A22.sparseView();

    const Eigen::MatrixXd A = Eigen::MatrixXd(out.sys.full());
    out.c = A.ldlt().solve(out.sys.rhs());
    out.discrete_energy2 = out.c.dot(A * out.c);
    out.exact_energy2 = oned_exact_energy2(p);
    out.epsilon = std::sqrt(std::abs(out.exact_energy2 - out.discrete_energy2));

    const ScaledSystem scaled = scale(out.sys);
    out.kappa_full = condition_number(scaled.A).kappa;
    if (n2 > 0) {
        out.kappa22 = condition_number(scaled.A22).kappa;
        out.theta_deg = subspace_angle(out.sys).theta_deg;
    }
    return out;
}

}  // namespace ifem

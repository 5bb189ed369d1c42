#include <doctest.h>

#include <cmath>

#include "ifem/oned.hpp"

using namespace ifem;

namespace {

OneDProblem paper_1d(int m) {
    OneDProblem p;
    p.gamma = (2.0 + 1.0 / M_PI) / 5.0;
    p.a0 = 1.0;
    p.a1 = 10.0;
    p.m = m;
    return p;
}

}  // namespace

TEST_CASE("1-d exact solution and energy") {
    const OneDProblem p = paper_1d(10);
    CHECK(oned_exact_u(p, 0.0) == 0.0);
    // a u' = 3 - x integrated against itself: energy = int (3-x)^2 / a
    double quad = 0.0;
    const int n = 100000;
    for (const auto& [lo, hi, a] : {std::tuple{0.0, p.gamma, p.a0}, {p.gamma, 1.0, p.a1}}) {
        const double dx = (hi - lo) / n;
        for (int i = 0; i < n; ++i) {
            const double x = lo + (i + 0.5) * dx;
            quad += (3.0 - x) * (3.0 - x) / a * dx;
        }
    }
    CHECK(oned_exact_energy2(p) == doctest::Approx(quad).epsilon(1e-8));

    // flux continuity at gamma: u' jumps by the coefficient ratio
    const double eps = 1e-9;
    const double left = (oned_exact_u(p, p.gamma) - oned_exact_u(p, p.gamma - eps)) / eps;
    const double right = (oned_exact_u(p, p.gamma + eps) - oned_exact_u(p, p.gamma)) / eps;
    CHECK(p.a0 * left == doctest::Approx(p.a1 * right).epsilon(1e-5));
}

TEST_CASE("1-d fem system: tridiagonal stiffness without a jump") {
    OneDProblem p = paper_1d(4);
    p.a0 = p.a1 = 1.0;
    p.gamma = 0.5;  // on a node; solver falls back to plain FEM
    const OneDResult r = solve_1d(p, Scheme::None);
    CHECK(r.sys.dofs.n1 == 4);
    CHECK(r.sys.dofs.n2 == 0);
    const Eigen::MatrixXd A = Eigen::MatrixXd(r.sys.A11);
    const double k = 1.0 / (1.0 / 4.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(A(i, i) == doctest::Approx(i == 3 ? k : 2 * k).epsilon(1e-13));
        if (i + 1 < 4) CHECK(A(i, i + 1) == doctest::Approx(-k).epsilon(1e-13));
    }
    // direct solution reproduces the exact nodal values (P1 is nodally exact
    // for this 1-d problem up to quadrature of the piecewise linear source)
    for (int i = 0; i < 4; ++i) {
        const double x = (i + 1) * 0.25;
        CHECK(r.c[i] == doctest::Approx(oned_exact_u(p, x)).epsilon(1e-3));
    }
}

TEST_CASE("1-d enrichment block sizes per scheme") {
    const OneDProblem p = paper_1d(10);  // gamma inside cell [0.4, 0.5]
    CHECK(solve_1d(p, Scheme::Sgfem).n_enr == 2);
    CHECK(solve_1d(p, Scheme::Topological).n_enr == 2);
    CHECK(solve_1d(p, Scheme::MGfem).n_enr == 4);
    CHECK(solve_1d(p, Scheme::Geometric).n_enr >= 4);  // R = 0.2 covers more nodes
}

TEST_CASE("1-d interface on a node drops the enrichment") {
    OneDProblem p = paper_1d(10);
    p.gamma = 0.5;
    const OneDResult r = solve_1d(p, Scheme::Sgfem);
    CHECK(r.enrichment_dropped);
    CHECK(r.n_enr == 0);
}

TEST_CASE("1-d direct solve is consistent and errors shrink") {
    double prev = 1e300;
    for (int m : {10, 20, 40}) {
        const OneDResult r = solve_1d(paper_1d(m), Scheme::Sgfem);
        const VecX res = r.sys.full() * r.c - r.sys.rhs();
        CHECK(res.norm() <= 1e-10 * r.sys.rhs().norm());
        CHECK(r.epsilon < prev);
        CHECK(r.discrete_energy2 <= r.exact_energy2 + 1e-10);
        prev = r.epsilon;
    }
}

TEST_CASE("1-d angle and conditioning are populated for enriched schemes") {
    const OneDResult r = solve_1d(paper_1d(20), Scheme::Sgfem);
    CHECK(r.theta_deg > 0.0);
    CHECK(r.theta_deg < 90.0);
    CHECK(r.kappa_full > 1.0);
    CHECK(r.kappa22 >= 1.0);
}

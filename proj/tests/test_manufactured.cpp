#include <doctest.h>

#include <random>

#include "ifem/diagnostics.hpp"
#include "ifem/experiments.hpp"
#include "ifem/manufactured.hpp"

using namespace ifem;

namespace {

const double kD0 = 1.0 - 1.0 / std::sqrt(2.0);
const double kTheta0 = M_PI / 6.0;
const double kXc = 1.0 / std::sqrt(5.0), kYc = 1.0 / std::sqrt(3.0);
const double kRc = 1.0 / std::sqrt(10.0);

Vec2 fd_grad(const ManufacturedSolution& u, const Vec2& p, double step = 1e-6) {
    return {(u.eval({p.x() + step, p.y()}) - u.eval({p.x() - step, p.y()})) / (2 * step),
            (u.eval({p.x(), p.y() + step}) - u.eval({p.x(), p.y() - step})) / (2 * step)};
}

}  // namespace

TEST_CASE("straight coefficients") {
    StraightSolution u(1.0, 10.0, 1.5, kD0, kTheta0);
    CHECK(u.B1() == doctest::Approx(0.1).epsilon(1e-15));
    StraightSolution smooth(3.0, 3.0, 1.5, kD0, kTheta0);
    CHECK(smooth.B1() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.eval({0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("straight jump conditions on the interface") {
    StraightSolution u(1.0, 10.0, 1.5, kD0, kTheta0);
    const InterfaceGeometry& g = u.geometry();
    // points on the line inside the square, approached from both sides
    const double t = std::tan(kTheta0);
    const Vec2 dir = Vec2(1.0, -t).normalized();
    const Vec2 n = Vec2(t, 1.0).normalized();
    const double eps = 1e-9;
    for (int i = 1; i <= 100; ++i) {
        const Vec2 p = Vec2(-kD0, 1.0) + dir * (1.05 * i / 100.0);
        if (p.x() < eps || p.x() > 1 - eps || p.y() < eps || p.y() > 1 - eps) continue;
        const Vec2 pp = p + eps * n, pm = p - eps * n;
        REQUIRE(g.side(pp) != g.side(pm));
        CHECK(std::abs(u.eval(pp) - u.eval(pm)) <= 1e-6);
        const double flux_p = u.coeff(pp) * u.grad(pp).dot(n);
        const double flux_m = u.coeff(pm) * u.grad(pm).dot(n);
        CHECK(std::abs(flux_p - flux_m) <= 1e-6);
    }
}

TEST_CASE("circle coefficients solve the matching system") {
    CircleSolution u(1.0, 10.0, kXc, kYc, kRc);
    // value continuity at r = rc
    CHECK(u.B0() * kRc * kRc + u.B1() / (kRc * kRc) ==
          doctest::Approx(kRc * kRc).epsilon(1e-14));
    // flux continuity: a0 is the outside coefficient
    CHECK(1.0 * (2 * u.B0() * kRc - 2 * u.B1() / (kRc * kRc * kRc)) ==
          doctest::Approx(10.0 * 2 * kRc).epsilon(1e-14));
    CHECK(u.eval({0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));

    CircleSolution smooth(2.0, 2.0, kXc, kYc, kRc);
    CHECK(smooth.B0() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(smooth.B1() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("circle jump conditions on the interface") {
    CircleSolution u(1.0, 10.0, kXc, kYc, kRc);
    const double eps = 1e-9;
    for (int i = 0; i < 100; ++i) {
        const double phi = 2.0 * M_PI * i / 100.0;
        const Vec2 n{std::cos(phi), std::sin(phi)};
        const Vec2 p = Vec2(kXc, kYc) + kRc * n;
        const Vec2 pp = p + eps * n, pm = p - eps * n;
        CHECK(std::abs(u.eval(pp) - u.eval(pm)) <= 1e-6);
        const double flux_p = u.coeff(pp) * u.grad(pp).dot(n);
        const double flux_m = u.coeff(pm) * u.grad(pm).dot(n);
        CHECK(std::abs(flux_p - flux_m) <= 1e-6);
    }
}

TEST_CASE("gradients match finite differences away from the interface") {
    StraightSolution us(1.0, 10.0, 1.5, kD0, kTheta0);
    CircleSolution uc(1.0, 10.0, kXc, kYc, kRc);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (const ManufacturedSolution* u : {(const ManufacturedSolution*)&us,
                                          (const ManufacturedSolution*)&uc}) {
        int tested = 0;
        while (tested < 50) {
            const Vec2 p{unif(rng), unif(rng)};
            if (u->geometry().distance(p) < 0.01) continue;
            const Vec2 g = u->grad(p), fd = fd_grad(*u, p);
            CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
            ++tested;
        }
    }
}

TEST_CASE("harmonic sanity: a0 = a1, alpha = 1 straight solution") {
    StraightSolution u(1.0, 1.0, 1.0, kD0, kTheta0);
    // r (cos + sin) harmonics are linear in x, y: the gradient is constant
    const Vec2 g0 = u.grad({0.2, 0.3});
    const Vec2 g1 = u.grad({0.8, 0.6});
    CHECK((g0 - g1).norm() <= 1e-12);
}

TEST_CASE("neumann data satisfies the compatibility condition") {
    StraightSolution us(1.0, 10.0, 1.5, kD0, kTheta0);
    CircleSolution uc(1.0, 10.0, kXc, kYc, kRc);
    for (const ManufacturedSolution* u : {(const ManufacturedSolution*)&us,
                                          (const ManufacturedSolution*)&uc}) {
        const double total = boundary_integral(
            [&](const Vec2& p, const Vec2& n) { return u->neumann(p, n); }, &u->geometry());
        CHECK(std::abs(total) <= 1e-8);
    }
}

TEST_CASE("boundary integral of 1 is the perimeter") {
    const double p = boundary_integral([](const Vec2&, const Vec2&) { return 1.0; });
    CHECK(p == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("exact energy matches a volume quadrature oracle") {
    // the true-error oracle with c = 0 integrates a |grad u|^2 with sides
    // taken from the exact interface
    ExperimentConfig cfg;
    for (const char* problem : {"straight", "circle"}) {
        cfg.problem = problem;
        ProblemSetup s = build_setup(cfg, Scheme::None, 64);
        const VecX zero = VecX::Zero(s.sys.size());
        const double vol =
            true_error_squared(s.mesh, s.cut, s.sub, s.basis, s.sys.dofs, zero, *s.u, 6, 3);
        CHECK(vol == doctest::Approx(s.exact_energy2).epsilon(1e-5));
    }
}

#include "ifem/manufactured.hpp"

#include <algorithm>
#include <cmath>

#include "ifem/quadrature.hpp"

namespace ifem {

namespace {

// Value and gradient (in the local (dx, dy) frame) of
// r^alpha (A cos(alpha (theta - theta0)) + B sin(alpha (theta - theta0))).
struct Polar {
    double u;
    double ux, uy;
};

Polar polar_harmonic(double dx, double dy, double alpha, double theta0, double A, double B) {
    const double r = std::hypot(dx, dy);
    const double theta = std::atan2(dy, dx);
    const double phi = alpha * (theta - theta0);
    const double c = std::cos(phi), s = std::sin(phi);
    const double ra = std::pow(r, alpha);
    Polar out;
    out.u = ra * (A * c + B * s);
    const double dur = alpha * std::pow(r, alpha - 1.0) * (A * c + B * s);
    const double dut = alpha * ra * (-A * s + B * c);  // du/dtheta
    const double ct = dx / r, st = dy / r;
    out.ux = dur * ct - dut * st / r;
    out.uy = dur * st + dut * ct / r;
    return out;
}

}  // namespace

StraightSolution::StraightSolution(double a0, double a1, double alpha, double d0, double theta0)
    : geom_(InterfaceGeometry::straight(d0, theta0)), alpha_(alpha), d0_(d0), theta0_(theta0) {
    a0_ = a0;
    a1_ = a1;
    // At theta = theta0 the sin term vanishes, so A0 = A1 = 1 gives value
    // continuity; flux continuity a0 d_theta u0 = a1 d_theta u1 reduces to
    // a0 B0 = a1 B1 with B0 = 1.
    B1_ = a0 / a1;
    C_ = 0.0;
    C_ = -eval({0.0, 0.0});
}

double StraightSolution::eval(const Vec2& p) const {
    const double dx = p.x() + d0_, dy = 1.0 - p.y();
    const double theta = std::atan2(dy, dx);
    const double B = theta < theta0_ ? 1.0 : B1_;
    return polar_harmonic(dx, dy, alpha_, theta0_, 1.0, B).u + C_;
}

Vec2 StraightSolution::grad(const Vec2& p) const {
    const double dx = p.x() + d0_, dy = 1.0 - p.y();
    const double theta = std::atan2(dy, dx);
    const double B = theta < theta0_ ? 1.0 : B1_;
    const Polar h = polar_harmonic(dx, dy, alpha_, theta0_, 1.0, B);
    // dy = 1 - y flips the sign of the y-derivative
    return {h.ux, -h.uy};
}

CircleSolution::CircleSolution(double a0, double a1, double xc, double yc, double rc)
    : geom_(InterfaceGeometry::circle(xc, yc, rc)) {
    a0_ = a0;
    a1_ = a1;
    // value:  B0 rc^2 + B1 rc^-2 = rc^2
    // flux:   a0 (2 B0 rc - 2 B1 rc^-3) = a1 * 2 rc   (a0 outside, a1 inside)
    Eigen::Matrix2d M;
    M << rc * rc, 1.0 / (rc * rc),
         2.0 * a0 * rc, -2.0 * a0 / (rc * rc * rc);
    const Eigen::Vector2d rhs{rc * rc, 2.0 * a1 * rc};
    const Eigen::Vector2d sol = M.fullPivLu().solve(rhs);
    B0_ = sol[0];
    B1_ = sol[1];
    C_ = 0.0;
    C_ = -eval({0.0, 0.0});
}

double CircleSolution::eval(const Vec2& p) const {
    const double dx = p.x() - geom_.xc, dy = p.y() - geom_.yc;
    const double r2 = dx * dx + dy * dy;
    const double cos2t = (dx * dx - dy * dy) / r2;
    if (r2 < geom_.rc * geom_.rc) return r2 * cos2t + C_;
    return (B0_ * r2 + B1_ / r2) * cos2t + C_;
}

Vec2 CircleSolution::grad(const Vec2& p) const {
    const double dx = p.x() - geom_.xc, dy = p.y() - geom_.yc;
    const double r2 = dx * dx + dy * dy;
    // r^2 cos(2 theta) = dx^2 - dy^2; r^-2 cos(2 theta) = (dx^2 - dy^2)/r^4
    if (r2 < geom_.rc * geom_.rc) return {2.0 * dx, -2.0 * dy};
    const double r4 = r2 * r2;
    const double q = dx * dx - dy * dy;
    const double gx = B0_ * 2.0 * dx + B1_ * (2.0 * dx * r4 - q * 4.0 * r2 * dx) / (r4 * r4);
    const double gy = B0_ * (-2.0 * dy) + B1_ * (-2.0 * dy * r4 - q * 4.0 * r2 * dy) / (r4 * r4);
    return {gx, gy};
}

double boundary_integral(const std::function<double(const Vec2&, const Vec2&)>& f,
                         const InterfaceGeometry* split_at) {
    const GaussRule& gl = gauss_legendre(64);
    const Vec2 corners[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
    const Vec2 normals[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
        const Vec2 a = corners[s], b = corners[s + 1];
        // breakpoints along [a,b]: interface crossings, then refine to <= 1/64
        std::vector<double> brk = {0.0, 1.0};
        if (split_at) {
            auto root_in = [&](double ga, double gb) {
                return (ga < 0.0) != (gb < 0.0) ? ga / (ga - gb) : -1.0;
            };
            if (split_at->kind == InterfaceGeometry::Kind::Straight) {
                const double t = root_in(split_at->level_set(a), split_at->level_set(b));
                if (t > 0.0 && t < 1.0) brk.push_back(t);
            } else {
                const Vec2 d = b - a;
                const Vec2 ac = a - Vec2{split_at->xc, split_at->yc};
                const double A = d.squaredNorm();
                const double B = 2.0 * d.dot(ac);
                const double C = ac.squaredNorm() - split_at->rc * split_at->rc;
                const double disc = B * B - 4.0 * A * C;
                if (disc > 0.0) {
                    const double sq = std::sqrt(disc);
                    for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)})
                        if (t > 0.0 && t < 1.0) brk.push_back(t);
                }
            }
            std::sort(brk.begin(), brk.end());
        }
        for (size_t k = 0; k + 1 < brk.size(); ++k) {
            const double len = brk[k + 1] - brk[k];
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / (1.0 / 64.0))));
            for (int p = 0; p < pieces; ++p) {
                const double t0 = brk[k] + len * p / pieces;
                const double dt = len / pieces;
                double acc = 0.0;
                for (int q = 0; q < 64; ++q) {
                    const Vec2 x = a + (t0 + dt * gl.x[q]) * (b - a);
                    acc += gl.w[q] * f(x, normals[s]);
                }
                total += acc * dt;  // |b - a| = 1
            }
        }
    }
    return total;
}

double ManufacturedSolution::exact_energy_squared() const {
    return boundary_integral(
        [this](const Vec2& p, const Vec2& n) { return eval(p) * neumann(p, n); }, &geometry());
}

}  // namespace ifem

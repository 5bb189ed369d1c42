#pragma once

#include <functional>

#include "ifem/mesh.hpp"

namespace ifem {

/// Exact solution of the Neumann interface problem, harmonic on each side of
/// the interface with matched value and flux across it, and u(0,0) = 0.
class ManufacturedSolution {
  public:
    virtual ~ManufacturedSolution() = default;

    virtual double eval(const Vec2& p) const = 0;
    virtual Vec2 grad(const Vec2& p) const = 0;
    virtual const InterfaceGeometry& geometry() const = 0;

    double coeff(const Vec2& p) const { return geometry().side(p) == 0 ? a0_ : a1_; }
    double a0() const { return a0_; }
    double a1() const { return a1_; }

    /// g_N = a grad(u) . n on the boundary; corner points take the normal of
    /// the edge they are evaluated on.
    double neumann(const Vec2& p, const Vec2& outward_normal) const {
        return coeff(p) * grad(p).dot(outward_normal);
    }

    /// ||u||_E^2 via the boundary integral of u g_N, composite Gauss
    /// quadrature with segments of length <= 1/64 split at interface
    /// crossings.
    double exact_energy_squared() const;

  protected:
    double a0_ = 1.0, a1_ = 1.0;
};

/// u = A_i r^alpha cos(alpha (theta - theta0)) + B_i r^alpha sin(...) + C in
/// polar coordinates around the pole A(-d0, 1), theta measured downward from
/// the horizontal polar line.  Side 0 is theta < theta0.
class StraightSolution : public ManufacturedSolution {
  public:
    StraightSolution(double a0, double a1, double alpha, double d0, double theta0);

    double eval(const Vec2& p) const override;
    Vec2 grad(const Vec2& p) const override;
    const InterfaceGeometry& geometry() const override { return geom_; }

    double A0() const { return 1.0; }
    double B0() const { return 1.0; }
    double B1() const { return B1_; }
    double C() const { return C_; }
    double alpha() const { return alpha_; }

  private:
    InterfaceGeometry geom_;
    double alpha_, d0_, theta0_;
    double B1_, C_;
};

/// u = r^2 cos(2 theta) + C inside the circle (coefficient a1), and
/// B0 r^2 cos(2 theta) + B1 r^-2 cos(2 theta) + C outside (side 0, a0),
/// around the circle center.  B0, B1 solve the 2x2 value/flux matching
/// system at r = rc.
class CircleSolution : public ManufacturedSolution {
  public:
    CircleSolution(double a0, double a1, double xc, double yc, double rc);

    double eval(const Vec2& p) const override;
    Vec2 grad(const Vec2& p) const override;
    const InterfaceGeometry& geometry() const override { return geom_; }

    double B0() const { return B0_; }
    double B1() const { return B1_; }
    double C() const { return C_; }

  private:
    InterfaceGeometry geom_;
    double B0_, B1_, C_;
};

/// Integral of f over the boundary of the unit square with the same composite
/// rule as exact_energy_squared; f(point, outward normal).
double boundary_integral(const std::function<double(const Vec2&, const Vec2&)>& f,
                         const InterfaceGeometry* split_at = nullptr);

}  // namespace ifem

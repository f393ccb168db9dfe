#pragma once

#include <Eigen/Dense>

#include "phl/paracomplex.hpp"

namespace phl {

// Point of the para-complex hyperbolic space, represented by a lift with q(lift, lift) = -1.
class HPoint {
public:
    // Throws std::invalid_argument if |q(lift, lift) + 1| > tol.
    explicit HPoint(PCVector lift, double tol = 1e-10);

    // Base point with lift e_0 e+ - e_n e-.
    static HPoint canonical(Eigen::Index n);

    const PCVector& lift() const { return lift_; }
    Eigen::Index ambient_dim() const { return lift_.size(); }
    Eigen::Index dim() const { return lift_.size() - 1; }

    // Representative of the unit-scalar orbit: plus block of unit norm with positive leading entry.
    HPoint normalized() const;
    bool equivalent(const HPoint& other, double tol = 1e-10) const;

private:
    PCVector lift_;
};

struct TangentVector {
    HPoint base;
    PCVector vec;
};

// Projective class of a line and a hyperplane (as a covector).
struct FlagPoint {
    Eigen::VectorXd line;
    Eigen::VectorXd functional;

    FlagPoint normalized() const;
    double incidence() const { return functional.dot(line); }
    double distance(const FlagPoint& other) const;
};

TangentVector project_tangent(const HPoint& z, const PCVector& v);
TangentVector para_structure(const TangentVector& t);

double metric_g(const TangentVector& u, const TangentVector& v);
double kahler_form(const TangentVector& u, const TangentVector& v);
// q(vec, base) should vanish on tangent vectors.
double tangency_defect(const TangentVector& t);

// Curvature tensor of constant para-holomorphic sectional curvature kappa.
double riemann_tensor(const TangentVector& x, const TangentVector& y, const TangentVector& z,
                      const TangentVector& w, double kappa = -4.0);
double sectional_curvature(const TangentVector& x, const TangentVector& y, double kappa = -4.0);

// Finite-difference oracle: parallel-transport z around the quadrilateral of side `step`
// centred at the base point in the (x, y) plane; returns g(R(x,y)z, w).
double holonomy_riemann(const TangentVector& x, const TangentVector& y, const TangentVector& z,
                        const TangentVector& w, double step = 1e-3, int substeps = 16);
double holonomy_sectional_curvature(const TangentVector& x, const TangentVector& y,
                                    double step = 1e-3, int substeps = 16);

// Boundary point of an isotropic vector: ([z+], [w -> (z-)^t Q w]).
// Throws std::invalid_argument if z is not isotropic within tol or a block vanishes.
FlagPoint flag_coords(const PCVector& z, double tol = 1e-10);

}  // namespace phl

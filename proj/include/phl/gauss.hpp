#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "phl/connection.hpp"
#include "phl/field.hpp"
#include "phl/paracomplex.hpp"

namespace phl {

// Unit-determinant positive-definite symmetric matrix.
class SymmetricPoint {
public:
    // Symmetrises the input; throws std::invalid_argument if it is not positive definite or
    // its determinant differs from 1 by more than tol.
    explicit SymmetricPoint(const Eigen::MatrixXd& h, double tol = 1e-10);

    const Eigen::MatrixXd& matrix() const { return h_; }
    Eigen::VectorXd eigenvalues() const;  // ascending

private:
    Eigen::MatrixXd h_;
};

// Real frame change adapting the orthonormal block frame to the holomorphic splitting:
// u_k scaled by sqrt(h_k), v_k by 1 / sqrt(h_k). Determinant one.
Eigen::MatrixXd holomorphic_gauge(const std::vector<double>& h);

// e+ component of the parallel frame, frame.plus. With a gauge D the lift is frame.plus * D.
Eigen::MatrixXd gauss_lift(const PCMatrix& frame);
Eigen::MatrixXd gauss_lift(const PCMatrix& frame, const Eigen::MatrixXd& gauge);

// Max of |det lift - 1| and the mismatch between the e- component and Q (lift^{-1})^t Q.
double lift_defect(const PCMatrix& frame);

// H = (lift^{-1})^t lift^{-1}. Throws std::invalid_argument on a singular lift.
SymmetricPoint symmetric_point(const Eigen::MatrixXd& lift);

struct MinimalityResiduals {
    double step = 0.0;
    double conformality = 0.0;  // |tr((H^{-1} H_z)^2)|
    double tension = 0.0;       // || d_zbar(H^{-1} H_z) + d_z(H^{-1} H_zbar) ||_max
};

// Residuals at one point from H on the 3 x 3 stencil of spacing step, frames transported from
// the given frame at the point.
MinimalityResiduals minimality_residuals(const ConnectionField& conn, const PCMatrix& frame,
                                         std::complex<double> point, double step);

struct MinimalityReport {
    std::vector<MinimalityResiduals> levels;  // step, step/2, ...
    double conformality = 0.0;                // at the first step, max over points
    double tension = 0.0;
    double tension_order = 0.0;               // observed log2 ratio between the first two steps
    double conformality_order = 0.0;
};

// Residuals over the points (frames transported from the first point), at step and step / 2.
MinimalityReport minimality_report(const ConnectionField& conn, const std::vector<std::complex<double>>& points,
                                   double step = 1e-3);

// Sine of the largest principal angle between span(sigma, P L_j : j odd), built from the Frenet
// blocks, and the real span of tau times the frame columns.
double gauss_subspace_defect(const PCMatrix& frame);

}  // namespace phl

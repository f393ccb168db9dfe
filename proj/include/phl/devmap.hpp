#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phl/hspace.hpp"
#include "phl/paracomplex.hpp"

namespace phl {

// The hyperbolic plane as the hyperboloid <p, p> = -1 of R^{2,1}, with <a, b> = a^t Q b for the
// anti-diagonal Q, embedded diagonally in the para-complex hyperbolic plane.
double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

struct TangentFrame {
    Eigen::Vector3d u;
    Eigen::Vector3d v;
};

// Point of the unit tangent bundle: base point and the angle of the fibre coordinate against the
// canonical frame at p.
struct UTPoint {
    Eigen::Vector3d p;
    double alpha = 0.0;

    // Throws std::invalid_argument unless <p, p> = -1 within 1e-12 (relative) and p is on the
    // sheet of the base point.
    void validate() const;
};

Eigen::Vector3d base_point();     // (1, 0, -1) / sqrt 2
TangentFrame base_frame();        // u = (1, 0, 1) / sqrt 2, v = (0, 1, 0)

// Exponential map at the base point along the unit direction cos(theta) u0 + sin(theta) v0.
Eigen::Vector3d polar_point(double radius, double theta);
// Transvection carrying the base point to p along the geodesic.
Eigen::Matrix3d transvection_to(const Eigen::Vector3d& p);
// The base frame parallel transported to p along the geodesic from the base point.
TangentFrame frame_at(const Eigen::Vector3d& p);

struct Sections {
    PCVector s1;  // cos a u + sin a v
    PCVector s2;  // -sin a P u + cos a P v
    PCVector s;   // s1 + s2
};

// Throws std::invalid_argument unless {u, v} is an orthonormal oriented tangent frame at p (1e-10).
Sections sections(const UTPoint& pt, const TangentFrame& frame);
Sections sections(const UTPoint& pt);

FlagPoint dev(const UTPoint& pt);

// At (p0, 3 pi / 4) the section is s+ = -sqrt 2 u0, s- = sqrt 2 v0. Max coordinate error of the
// computed section against that value, and flag distance of dev against its flag.
struct AnchorReport {
    double section_error = 0.0;
    double flag_error = 0.0;
};
AnchorReport anchor_check();

struct GWStatus {
    bool member = false;
    bool boundary = false;  // a norm within the lightlike tolerance
    double line_norm = 0.0;    // <l, l> for the unit-normalised line
    double kernel_norm = 0.0;  // <n, n> for the unit-normalised orthogonal of the kernel
};

GWStatus gw_membership(const FlagPoint& flag, double lightlike_tol = 1e-9);

// det of (s1, s2, d/da s1, d/da s2, pr X, pr Y) in stacked idempotent coordinates.
double transversality_det(const UTPoint& pt);

// Action of an orientation-preserving isometry on the unit tangent bundle; the angle is re-read
// against the canonical frame at the image point.
UTPoint act(const Eigen::Matrix3d& g, const UTPoint& pt);
// distance(dev(g . pt), Psi(g) . dev(pt)).
double equivariance_defect(const Eigen::Matrix3d& g, const UTPoint& pt);
// Rotation of the base tangent plane composed with a transvection; an element of SO_0(2,1).
Eigen::Matrix3d isometry(double radius, double theta, double rotation);

// Preimage of a flag in the domain: the base point is the timelike normal of span(line, kernel
// orthogonal). Throws std::invalid_argument if the flag fails the membership test.
UTPoint dev_preimage(const FlagPoint& flag);

struct CollisionReport {
    std::size_t samples = 0;
    std::size_t collisions = 0;  // distinct classes with coinciding flags
    std::size_t identified = 0;  // pairs related by alpha -> alpha + pi
};

CollisionReport find_collisions(std::span<const UTPoint> points, std::span<const FlagPoint> flags, double tol = 1e-8);
CollisionReport injectivity_probe(std::span<const UTPoint> points, double tol = 1e-8);

// Low-discrepancy samples (Halton bases 2, 3, 5) over radius <= max_radius and alpha in [0, 2 pi).
std::vector<UTPoint> halton_samples(std::size_t count, double max_radius);
// Regular grid in geodesic polar coordinates and alpha, count per axis.
std::vector<UTPoint> grid_samples(int per_axis, double max_radius);

}  // namespace phl

#include <doctest.h>

#include <random>

#include "phl/hspace.hpp"

using namespace phl;

namespace {

PCVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    PCVector v = PCVector::zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v.plus(i) = normal(rng);
        v.minus(i) = normal(rng);
    }
    return v;
}

// A point away from the canonical one: the image of the canonical point under a unit-determinant
// block of Psi acting diagonally.
HPoint random_point(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const HPoint base = HPoint::canonical(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n + 1, n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
        for (Eigen::Index j = 0; j <= n; ++j) a(i, j) += 0.3 * normal(rng);
    }
    if (a.determinant() < 0.0) a.row(0) *= -1.0;
    a /= std::pow(a.determinant(), 1.0 / static_cast<double>(n + 1));
    return HPoint(psi_iso(a) * base.lift(), 1e-9);
}

TangentVector unit_spacelike(const HPoint& z, std::mt19937_64& rng) {
    for (;;) {
        const PCVector v = random_vector(z.ambient_dim(), rng);
        TangentVector t = project_tangent(z, PCVector::real(v.plus));
        const double g = metric_g(t, t);
        if (g > 0.1) {
            t.vec = (1.0 / std::sqrt(g)) * t.vec;
            return t;
        }
    }
}

}  // namespace

TEST_CASE("the canonical point lies on the quadric and normalisation picks one orbit representative") {
    const HPoint z = HPoint::canonical(2);
    const ParaComplex n = q_form(z.lift(), z.lift());
    CHECK(n.re == doctest::Approx(-1.0));
    CHECK(std::abs(n.im_tau) < 1e-15);
    const ParaComplex unit = unit_hyperbolic(0.3);
    const HPoint scaled(unit * z.lift());
    CHECK(scaled.equivalent(z));
    CHECK_THROWS_AS(HPoint(PCVector::real(Eigen::VectorXd::Ones(3))), std::invalid_argument);
}

TEST_CASE("projection onto the tangent space") {
    std::mt19937_64 rng(4);
    const HPoint z = random_point(4, rng);
    CHECK(project_tangent(z, z.lift()).vec.norm() < 1e-12);
    for (int k = 0; k < 50; ++k) {
        const TangentVector t = project_tangent(z, random_vector(5, rng));
        CHECK(tangency_defect(t) < 1e-12 * (1.0 + t.vec.norm()));
        const TangentVector again = project_tangent(z, t.vec);
        CHECK((again.vec - t.vec).norm() < 1e-12 * (1.0 + t.vec.norm()));
    }
}

TEST_CASE("para-complex structure is an anti-isometric involution") {
    std::mt19937_64 rng(8);
    const HPoint z = random_point(2, rng);
    for (int k = 0; k < 50; ++k) {
        const TangentVector u = project_tangent(z, random_vector(3, rng));
        const TangentVector v = project_tangent(z, random_vector(3, rng));
        const TangentVector pp = para_structure(para_structure(u));
        CHECK((pp.vec - u.vec).norm() == 0.0);
        const double scale = 1.0 + u.vec.norm() * v.vec.norm();
        CHECK(std::abs(metric_g(para_structure(u), para_structure(v)) + metric_g(u, v)) < 1e-12 * scale);
        CHECK(std::abs(kahler_form(u, v) + kahler_form(v, u)) < 1e-12 * scale);
        CHECK(std::abs(kahler_form(u, u)) < 1e-12 * scale);
    }
}

TEST_CASE("curvature tensor symmetries") {
    std::mt19937_64 rng(12);
    const HPoint z = random_point(4, rng);
    for (int k = 0; k < 20; ++k) {
        const TangentVector x = project_tangent(z, random_vector(5, rng));
        const TangentVector y = project_tangent(z, random_vector(5, rng));
        const TangentVector u = project_tangent(z, random_vector(5, rng));
        const TangentVector w = project_tangent(z, random_vector(5, rng));
        const double r = riemann_tensor(x, y, u, w);
        const double scale = 1.0 + std::abs(r);
        CHECK(std::abs(r + riemann_tensor(y, x, u, w)) < 1e-12 * scale);
        CHECK(std::abs(r - riemann_tensor(u, w, x, y)) < 1e-12 * scale);
        CHECK(std::abs(r + riemann_tensor(x, y, w, u)) < 1e-12 * scale);
    }
}

TEST_CASE("para-holomorphic sectional curvature is -4") {
    std::mt19937_64 rng(21);
    for (const Eigen::Index n : {2, 4}) {
        const HPoint z = random_point(n, rng);
        const TangentVector x = unit_spacelike(z, rng);
        CHECK(sectional_curvature(x, para_structure(x)) == doctest::Approx(-4.0).epsilon(1e-12));
        CHECK(sectional_curvature(x, para_structure(x), -2.0) == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("finite-difference holonomy of the quadric matches the curvature formula") {
    std::mt19937_64 rng(2);
    const HPoint z = HPoint::canonical(2);
    const TangentVector x = unit_spacelike(z, rng);
    const TangentVector px = para_structure(x);
    CHECK(holonomy_sectional_curvature(x, px) == doctest::Approx(-4.0).epsilon(1e-5));
    const TangentVector y = project_tangent(z, random_vector(3, rng));
    const TangentVector w = project_tangent(z, random_vector(3, rng));
    const double formula = riemann_tensor(x, y, x, w);
    CHECK(std::abs(holonomy_riemann(x, y, x, w) - formula) < 1e-5 * (1.0 + std::abs(formula)));
}

TEST_CASE("mismatched base points are rejected") {
    std::mt19937_64 rng(3);
    const HPoint a = HPoint::canonical(2);
    const HPoint b = random_point(2, rng);
    const TangentVector u = project_tangent(a, random_vector(3, rng));
    const TangentVector v = project_tangent(b, random_vector(3, rng));
    CHECK_THROWS_AS(metric_g(u, v), std::invalid_argument);
}

TEST_CASE("flag coordinates of isotropic vectors") {
    std::mt19937_64 rng(6);
    // q(z, z) = 0 exactly when (z+)^t Q z- = 0.
    for (int k = 0; k < 100; ++k) {
        PCVector z = random_vector(3, rng);
        const Eigen::MatrixXd q = anti_diagonal_form(3);
        const double pairing = z.plus.dot(q * z.minus);
        const ParaComplex n = q_form(z, z);
        CHECK(std::abs(n.plus() - pairing) < 1e-12);
        CHECK(std::abs(n.minus() - pairing) < 1e-12);
        // Make it isotropic by correcting the last minus entry.
        z.minus(2) -= pairing / z.plus(0);
        const FlagPoint f = flag_coords(z);
        CHECK(std::abs(f.normalized().incidence()) < 1e-10);
        const FlagPoint g = flag_coords(unit_hyperbolic(0.3) * z);
        CHECK(f.distance(g) < 1e-12);
    }
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
    e1(0) = 1.0;
    const FlagPoint f = flag_coords(PCVector(e1, e1));
    CHECK(f.incidence() == 0.0);
    CHECK_THROWS_AS(flag_coords(PCVector(e1, Eigen::VectorXd::Zero(3))), std::invalid_argument);
    CHECK_THROWS_AS(flag_coords(PCVector::real(Eigen::VectorXd::Ones(3))), std::invalid_argument);
}

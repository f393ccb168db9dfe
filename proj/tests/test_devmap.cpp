#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phl/devmap.hpp"

using namespace phl;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd stacked(const Eigen::Vector3d& plus, const Eigen::Vector3d& minus) {
    Eigen::VectorXd v(6);
    v << plus, minus;
    return v;
}

}  // namespace

TEST_CASE("base point and frame") {
    CHECK(minkowski(base_point(), base_point()) == doctest::Approx(-1.0));
    const TangentFrame f = base_frame();
    CHECK(minkowski(f.u, f.u) == doctest::Approx(1.0));
    CHECK(minkowski(f.v, f.v) == doctest::Approx(1.0));
    CHECK(std::abs(minkowski(f.u, base_point())) < 1e-16);
    UTPoint off{Eigen::Vector3d(1.0, 0.0, 0.0), 0.0};
    CHECK_THROWS_AS(off.validate(), std::invalid_argument);
    UTPoint other_sheet{-base_point(), 0.0};
    CHECK_THROWS_AS(other_sheet.validate(), std::invalid_argument);
}

TEST_CASE("transvections are isometries carrying the base point") {
    for (const double r : {0.3, 1.5, 4.0}) {
        const Eigen::Vector3d p = polar_point(r, 0.7);
        const Eigen::Matrix3d b = transvection_to(p);
        CHECK((b * base_point() - p).norm() < 1e-12 * std::cosh(r));
        const TangentFrame f = frame_at(p);
        CHECK(minkowski(f.u, f.u) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(minkowski(f.u, p)) < 1e-10 * std::cosh(r));
        CHECK(std::abs(minkowski(f.v, p)) < 1e-10 * std::cosh(r));
    }
}

TEST_CASE("transversality determinant at the base point by hand") {
    // alpha = 0: s1 = u, s2 = tau v, d s1 = v, d s2 = -tau u, sigma, tau sigma.
    const TangentFrame f = base_frame();
    const Eigen::Vector3d p = base_point();
    Eigen::Matrix<double, 6, 6> m;
    m.col(0) = stacked(f.u, f.u);
    m.col(1) = stacked(f.v, -f.v);
    m.col(2) = stacked(f.v, f.v);
    m.col(3) = stacked(-f.u, f.u);
    m.col(4) = stacked(p, p);
    m.col(5) = stacked(p, -p);
    CHECK(std::abs(m.determinant()) == doctest::Approx(8.0));
    CHECK(std::abs(transversality_det({p, 0.0})) == doctest::Approx(8.0));
}

TEST_CASE("transversality determinant is constant on the bundle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(0.0, 2.0), a(0.0, 2.0 * kPi);
    for (int k = 0; k < 50; ++k) {
        const UTPoint pt{polar_point(r(rng), a(rng)), a(rng)};
        CHECK(std::abs(transversality_det(pt)) == doctest::Approx(8.0).epsilon(1e-9));
    }
}

TEST_CASE("anchor identity") {
    const AnchorReport rep = anchor_check();
    CHECK(rep.section_error < 1e-12);
    CHECK(rep.flag_error < 1e-12);
}

TEST_CASE("the sections have the expected norms and isotropy") {
    const UTPoint pt{polar_point(0.8, 1.2), 0.4};
    const Sections s = sections(pt);
    const ParaComplex n1 = q_form(s.s1, s.s1);
    const ParaComplex n2 = q_form(s.s2, s.s2);
    CHECK(n1.re == doctest::Approx(1.0));
    CHECK(n2.re == doctest::Approx(-1.0));
    CHECK(std::abs(q_form(s.s, s.s).re) < 1e-12);
    CHECK(std::abs(q_form(s.s, s.s).im_tau) < 1e-12);
    TangentFrame bad = frame_at(pt.p);
    std::swap(bad.u, bad.v);
    CHECK_THROWS_AS(sections(pt, bad), std::invalid_argument);
}

TEST_CASE("dev is pi-periodic in the fibre and lands in the domain") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> r(0.0, 2.0), a(0.0, 2.0 * kPi);
    for (int k = 0; k < 100; ++k) {
        const UTPoint pt{polar_point(r(rng), a(rng)), a(rng)};
        const FlagPoint f = dev(pt);
        CHECK(f.distance(dev({pt.p, pt.alpha + kPi})) < 1e-12);
        CHECK(gw_membership(f).member);
        CHECK(std::abs(f.normalized().incidence()) < 1e-12);
    }
    // Off the domain: a lightlike line is on the boundary.
    FlagPoint edge;
    edge.line = Eigen::Vector3d(1.0, 0.0, 0.0);
    edge.functional = Eigen::Vector3d(0.0, 1.0, 0.0);
    CHECK(!gw_membership(edge).member);
}

TEST_CASE("dev is equivariant") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> r(0.0, 1.5), a(0.0, 2.0 * kPi);
    for (int k = 0; k < 30; ++k) {
        const Eigen::Matrix3d g = isometry(r(rng), a(rng), a(rng));
        CHECK(std::abs(g.determinant() - 1.0) < 1e-10);
        const UTPoint pt{polar_point(r(rng), a(rng)), a(rng)};
        CHECK(equivariance_defect(g, pt) < 1e-9);
    }
}

TEST_CASE("dev_preimage inverts dev up to the fibre period") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> r(0.0, 2.0), a(0.0, 2.0 * kPi);
    for (int k = 0; k < 50; ++k) {
        const UTPoint pt{polar_point(r(rng), a(rng)), a(rng)};
        const UTPoint back = dev_preimage(dev(pt));
        CHECK((back.p - pt.p).norm() < 1e-9 * std::cosh(2.0));
        const double turn = std::remainder(back.alpha - pt.alpha, kPi);
        CHECK(std::abs(turn) < 1e-9);
    }
}

TEST_CASE("the collision probe finds planted collisions and none in dev") {
    const auto points = halton_samples(2000, 2.0);
    CHECK(points.size() == 2000);
    const CollisionReport clean = injectivity_probe(points);
    CHECK(clean.collisions == 0);

    // Same flag for two different base points is a collision; alpha and alpha + pi are identified.
    std::vector<UTPoint> planted{{base_point(), 0.3}, {polar_point(1.0, 0.2), 0.5}, {base_point(), 0.3 + kPi}};
    std::vector<FlagPoint> flags{dev(planted[0]), dev(planted[0]), dev(planted[2])};
    const CollisionReport rep = find_collisions(planted, flags);
    CHECK(rep.collisions >= 1);
    CHECK(rep.identified >= 1);
}

TEST_CASE("sample generators") {
    const auto grid = grid_samples(4, 1.0);
    CHECK(grid.size() == 64);
    for (const auto& pt : grid) CHECK_NOTHROW(pt.validate());
}

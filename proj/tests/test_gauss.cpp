#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "phl/gauss.hpp"
#include "phl/immersion.hpp"

using namespace phl;

namespace {

std::shared_ptr<const HiggsField> chart(int m) {
    return std::make_shared<ChartField>(m, std::complex<double>(0.8, 0.3), std::complex<double>(0.1, 0.05));
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

}  // namespace

TEST_CASE("symmetric points") {
    Eigen::Matrix2d h;
    h << 2.0, 0.0, 0.0, 0.5;
    const SymmetricPoint p(h);
    CHECK(p.eigenvalues()(0) == doctest::Approx(0.5));
    CHECK(p.eigenvalues()(1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(SymmetricPoint(Eigen::Matrix2d::Identity() * 2.0), std::invalid_argument);
    Eigen::Matrix2d indefinite;
    indefinite << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(SymmetricPoint{indefinite}, std::invalid_argument);
}

TEST_CASE("the holomorphic gauge has unit determinant") {
    const Eigen::MatrixXd g = holomorphic_gauge({2.0, 5.0});
    CHECK(g.rows() == 5);
    CHECK(g.determinant() == doctest::Approx(1.0));
}

TEST_CASE("H is invariant under orthogonal changes of the lift") {
    std::mt19937_64 rng(7);
    const ConnectionField conn(chart(2));
    const PCMatrix frame = transport_segment(conn, initial_frame(2), 0.0, {0.2, 0.1}, TransportOptions{});
    const Eigen::MatrixXd lift = gauss_lift(frame);
    CHECK(lift_defect(frame) < 1e-10);
    const SymmetricPoint base = symmetric_point(lift);
    for (int k = 0; k < 10; ++k) {
        Eigen::MatrixXd o = random_orthogonal(5, rng);
        if (o.determinant() < 0.0) o.col(0) *= -1.0;
        const SymmetricPoint turned = symmetric_point(lift * o);
        CHECK((turned.matrix() - base.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("base-point eigenvalues are {h_i, 1 / h_i, 1}") {
    for (int m = 1; m <= 3; ++m) {
        const auto f = chart(m);
        const FieldSample s = f->sample(0.0, 0.0);
        const Eigen::VectorXd ev = symmetric_point(gauss_lift(initial_frame(m), holomorphic_gauge(s.h))).eigenvalues();
        std::vector<double> expected{1.0};
        for (double h : s.h) {
            expected.push_back(h);
            expected.push_back(1.0 / h);
        }
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::abs(ev(static_cast<Eigen::Index>(i)) - expected[i]) < 1e-8);
        }
    }
}

TEST_CASE("the Gauss map is conformal and harmonic") {
    for (int m = 1; m <= 2; ++m) {
        const ConnectionField conn(chart(m));
        const MinimalityReport rep = minimality_report(conn, {0.0, {0.1, 0.05}, {-0.1, 0.2}});
        CAPTURE(m);
        CHECK(rep.conformality < 1e-5);
        CHECK(rep.tension < 1e-4);
        CHECK(rep.tension_order > 1.8);
    }
    // The constant solution: the finite-difference stencil is exact up to roundoff.
    const ConnectionField flat(std::make_shared<ConstantField>(ConstantField::from_gammas({1.0, {0.6, 0.8}})));
    const MinimalityReport rep = minimality_report(flat, {0.0});
    CHECK(rep.conformality < 1e-6);
    CHECK(rep.tension < 1e-4);
}

TEST_CASE("a corrupted connection is not minimal") {
    const ConnectionField bad(chart(2), Corruption{true});
    const MinimalityReport rep = minimality_report(bad, {0.0});
    CHECK(std::max(rep.conformality, rep.tension) > 1e-2);
}

TEST_CASE("the Gauss image of the frame spans sigma and the odd blocks") {
    CHECK(gauss_subspace_defect(initial_frame(1)) < 1e-12);
    CHECK(gauss_subspace_defect(initial_frame(2)) < 1e-12);
}

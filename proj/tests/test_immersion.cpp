#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "phl/frenet.hpp"
#include "phl/immersion.hpp"

using namespace phl;

namespace {

std::shared_ptr<const HiggsField> constant_m2() {
    return std::make_shared<ConstantField>(ConstantField::from_gammas({1.0, {0.6, 0.8}}));
}

// Closed polyline of total length `length` on a circle through the origin.
std::vector<std::complex<double>> circle_path(double length, int vertices) {
    const double radius = length / (2.0 * std::numbers::pi);
    std::vector<std::complex<double>> path;
    for (int k = 0; k <= vertices; ++k) {
        path.push_back(std::polar(radius, 2.0 * std::numbers::pi * k / vertices) - radius);
    }
    return path;
}

}  // namespace

TEST_CASE("sigma in the local frame and at the initial frame") {
    const PCVector s = sigma_local(2);
    CHECK(s.plus(0) == 1.0);
    CHECK(s.minus(0) == -1.0);
    const HPoint z = sigma_of(initial_frame(2));
    CHECK(z.equivalent(HPoint::canonical(4)));
}

TEST_CASE("immersion invariants along a path of length 10") {
    const ConnectionField conn(constant_m2());
    const FrameField ff = transport_frame(conn, circle_path(10.0, 1000), initial_frame(2));
    REQUIRE(ff.frames.size() == 1001);
    const auto samples = immerse(conn, ff, 1e-3, 50);
    REQUIRE(samples.size() >= 10);
    for (const auto& s : samples) {
        CHECK(s.sigma_defect < 1e-8);
        CHECK(std::abs(s.q_z_zbar.plus) < 1e-6);
        CHECK(std::abs(s.q_z_zbar.minus) < 1e-6);
        CHECK(std::abs(s.q_z_z.plus - s.h1) < 1e-5);
        CHECK(std::abs(s.q_zbar_zbar.minus - s.h1) < 1e-5);
        CHECK(s.harmonic_tangential < 1e-5);
    }
    CHECK(ff.max_step_drift < 1e-10);
}

TEST_CASE("immersion invariants on a non-constant exact solution") {
    const auto chart = std::make_shared<ChartField>(2, std::complex<double>(0.8, 0.3), std::complex<double>(0.1, 0.05));
    const ConnectionField conn(chart);
    const FrameField ff = transport_frame(conn, {0.0, {0.4, 0.0}, {0.4, 0.3}}, initial_frame(2));
    for (const auto& s : immerse(conn, ff, 1e-3, 100)) {
        CHECK(s.sigma_defect < 1e-8);
        CHECK(std::abs(s.q_z_zbar.plus) < 1e-6);
        CHECK(std::abs(s.q_z_z.plus - s.h1) < 1e-5 * (1.0 + s.h1));
        CHECK(s.harmonic_tangential < 1e-5);
    }
}

TEST_CASE("plaquette holonomy sits at roundoff for a flat connection") {
    const ConnectionField conn(constant_m2());
    const PlaquetteReport rep = plaquette_flatness(conn, {0.1, 0.2}, 0.05);
    REQUIRE(rep.defects.size() == 3);
    // One RK4 step per edge is not exactly reversible: the loop error is O(side^6), far below
    // the O(side^2) curvature term of a non-flat connection.
    CHECK(rep.defects[0] < 1e-8);
    CHECK(rep.defects[2] < 1e-12);
    CHECK(rep.order > 4.0);
    // The corrupted connection has curvature: the defect scales with the area.
    const ConnectionField bad(constant_m2(), Corruption{true});
    const PlaquetteReport curved = plaquette_flatness(bad, {0.1, 0.2}, 0.05);
    CHECK(curved.defects[0] > 1e-4);
    CHECK(curved.order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Frenet checks pass on the m = 1 and m = 2 presets") {
    for (int m = 1; m <= 2; ++m) {
        const auto fields = std::vector<std::shared_ptr<const HiggsField>>{
            std::make_shared<ConstantField>(ConstantField::from_gammas(std::vector<std::complex<double>>(
                static_cast<std::size_t>(m), 1.0))),
            std::make_shared<ChartField>(m, std::complex<double>(0.7, 0.2), std::complex<double>(0.1, 0.05)),
            std::make_shared<FuchsianField>(m)};
        for (const auto& f : fields) {
            const FrenetReport rep = frenet_verify(ConnectionField(f), {0.1, 0.05});
            CAPTURE(f->name());
            CAPTURE(m);
            CHECK(rep.all_pass());
            CHECK(rep.gram_min > 0.0);
            // gamma_m = 0 for the uniformising field, so L_m and L_{m+1} decouple there.
            if (f->name() != "fuchsian") CHECK(rep.adjacent_min > rep.offblock_max);
        }
    }
}

TEST_CASE("the corrupted connection fails the conformality check") {
    const FrenetReport rep = frenet_verify(ConnectionField(constant_m2(), Corruption{true}), 0.0);
    CHECK(!rep.conformal_ok);
    CHECK(!rep.all_pass());
}

TEST_CASE("Frenet blocks of the identity frame") {
    const auto blocks = frenet_blocks(initial_frame(2));
    REQUIRE(blocks.size() == 4);
    for (int j = 1; j <= 4; ++j) {
        const auto local = block_basis_local(2, j);
        CHECK((blocks[static_cast<std::size_t>(j - 1)][0].plus - to_ambient(initial_frame(2), local[0]).plus).norm() ==
              0.0);
    }
    CHECK_THROWS(block_basis_local(2, 5));
}

TEST_CASE("gamma_1 = 0 splits off a totally geodesic factor") {
    const ConnectionField split(std::make_shared<SplitField>(std::complex<double>(0.5, 0.2)));
    // L_1 and L_4 couple to sigma only.
    CHECK(block_decoupling(split, {0.2, 0.1}, {1, 4}) < 1e-8);
    // With gamma_1 != 0 the same group is coupled.
    const ConnectionField fuchsian(std::make_shared<FuchsianField>(2));
    CHECK(block_decoupling(fuchsian, {0.2, 0.1}, {1, 4}) > 1e-3);
}

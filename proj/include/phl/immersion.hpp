#pragma once

#include <complex>
#include <vector>

#include "phl/connection.hpp"
#include "phl/hspace.hpp"
#include "phl/paracomplex.hpp"

namespace phl {

// Ambient coordinates of a local frame vector w: x = G (w+, Q w-).
PCVector to_ambient(const PCMatrix& frame, const PCVector& local);
// sigma sits at tau * b0 in the local frame.
PCVector sigma_local(int m);
HPoint sigma_of(const PCMatrix& frame);
// The frame at the base point of the transport: G = identity (sigma = canonical point).
PCMatrix initial_frame(int m);

struct TransportOptions {
    double step = 1e-3;
    double drift_limit = 1e-4;  // per step, before retraction
    bool retract = true;
};

struct FrameField {
    std::vector<std::complex<double>> path;
    std::vector<PCMatrix> frames;
    std::vector<HPoint> sigma;
    std::vector<double> drift;  // accumulated pre-retraction defect at each sample
    double max_step_drift = 0.0;
};

// RK4 for dG+ = G+ Omega, dG- = G- (-Q Omega^t Q) along the polyline through `path`,
// with segments cut into steps no longer than options.step. Throws std::runtime_error if
// the per-step drift exceeds options.drift_limit.
FrameField transport_frame(const ConnectionField& conn, const std::vector<std::complex<double>>& path,
                           const PCMatrix& start, const TransportOptions& options = {});
PCMatrix transport_segment(const ConnectionField& conn, const PCMatrix& start, std::complex<double> from,
                           std::complex<double> to, const TransportOptions& options, double* max_drift = nullptr);

struct ImmersionSample {
    std::complex<double> point;
    HPoint sigma;
    BCVector sigma_z;
    BCVector sigma_zbar;
    double sigma_defect = 0.0;    // |q(sigma, sigma) + 1|
    BiComplex q_z_zbar{};         // expected 0
    BiComplex q_z_z{};            // expected (h1, h1)
    BiComplex q_zbar_zbar{};      // expected (h1, h1)
    double h1 = 0.0;
    double harmonic_tangential = 0.0;  // tangential part of d_zbar d_z sigma - h1 sigma
    double harmonic_full = 0.0;
};

// Centered differences of sigma at `point` from the frame there, with spacing delta.
ImmersionSample immerse_at(const ConnectionField& conn, const PCMatrix& frame, std::complex<double> point,
                           double delta);
std::vector<ImmersionSample> immerse(const ConnectionField& conn, const FrameField& frames, double delta,
                                     std::size_t stride = 1);

struct PlaquetteReport {
    std::vector<double> sides;
    std::vector<double> defects;  // max-norm of F_loop - I, both idempotent parts
    double order = 0.0;           // fitted log-slope of defect against side
};

// Holonomy of square plaquettes at `corner`, one RK4 step per edge, for side, side/2, side/4.
PlaquetteReport plaquette_flatness(const ConnectionField& conn, std::complex<double> corner, double side);

// Transport along two lattice paths from `from` to `to` (x first vs y first); returns the
// max-norm difference of the resulting frames.
double holonomy_invariance(const ConnectionField& conn, std::complex<double> from, std::complex<double> to,
                           const TransportOptions& options = {});

}  // namespace phl

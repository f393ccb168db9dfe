#pragma once

#include <array>
#include <complex>
#include <vector>

#include "phl/connection.hpp"
#include "phl/immersion.hpp"

namespace phl {

// Local frame coordinates of the basis of the Frenet block L_j, j = 1..2m:
// L_k = tau^{k-1} span(u_k, v_k) for k <= m and L_{2m+1-k} = tau^{2m-k} span(u_k, v_k).
std::array<PCVector, 2> block_basis_local(int m, int j);
// Ambient vectors of every block under the frame; result[j-1] holds L_j.
std::vector<std::array<PCVector, 2>> frenet_blocks(const PCMatrix& frame);

struct FrenetOptions {
    double delta = 1e-3;        // finite-difference spacing
    double patch_radius = 0.05;  // sample points around the centre
    int patch_points = 3;        // per side
    double tol_gram = 1e-6;
    double tol_angle = 1e-6;
    double tol_omega = 1e-10;
    double tol_tridiagonal = 1e-6;
    double tol_conformal = 1e-10;
};

struct FrenetReport {
    int m = 0;
    double gram_min = 0.0;        // (a) min over blocks of sign_j * smallest Gram eigenvalue
    double angle_max = 0.0;       // (b) sine of the largest principal angle
    double omega_max = 0.0;       // (c)
    double offblock_max = 0.0;    // (d) couplings between blocks with |i - j| >= 2
    double adjacent_min = 0.0;    //     smallest adjacent coupling seen (for context)
    double conformality_max = 0.0;  // (e)
    bool gram_ok = false;
    bool angle_ok = false;
    bool omega_ok = false;
    bool tridiagonal_ok = false;
    bool conformal_ok = false;
    int samples = 0;

    bool all_pass() const { return gram_ok && angle_ok && omega_ok && tridiagonal_ok && conformal_ok; }
};

FrenetReport frenet_verify(const ConnectionField& conn, std::complex<double> centre, const FrenetOptions& options = {});

// Couplings |g(nabla e_a, e_b)| with a in the listed blocks and b outside them (and sigma),
// maximised over the patch. Used to exhibit a totally geodesic factor.
double block_decoupling(const ConnectionField& conn, std::complex<double> centre, const std::vector<int>& group,
                        const FrenetOptions& options = {});

// Couplings between every pair of blocks at a point (max over directions x, y), derived by
// finite differences of transported frames. Entry (i-1, j-1) refers to blocks L_i, L_j.
Eigen::MatrixXd block_couplings(const ConnectionField& conn, const PCMatrix& frame, std::complex<double> point,
                                double delta);

}  // namespace phl

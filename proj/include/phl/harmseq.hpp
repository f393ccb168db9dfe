#pragma once

#include <complex>
#include <vector>

#include "phl/connection.hpp"
#include "phl/immersion.hpp"
#include "phl/paracomplex.hpp"

namespace phl {

struct SequenceOptions {
    int depth = 0;          // 0 selects 2m + 2
    double spacing = 0.02;  // grid spacing of the patch
    double step = 1e-3;     // transport step between nodes
};

// Square patch of nodes centre + spacing * (i + i j), |i|, |j| <= half.
template <typename T>
struct PatchGrid {
    int half = 0;
    std::vector<T> values;  // row-major in j, then i

    int side() const { return 2 * half + 1; }
    const T& at(int i, int j) const { return values[index(i, j)]; }
    T& at(int i, int j) { return values[index(i, j)]; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>((j + half) * side() + (i + half));
    }
};

// phi_{z,1} = d sigma(d/dz) and phi_{z,k+1} = nabla_{d/dz} phi_{z,k}, with nabla the Levi-Civita
// connection of the target: flat derivative followed by projection off C_tau sigma.
struct HarmonicSequence {
    int m = 0;
    int depth = 0;
    double spacing = 0.0;
    std::complex<double> centre;
    PatchGrid<PCMatrix> frames;
    PatchGrid<PCVector> sigma;
    std::vector<PatchGrid<BCVector>> terms;  // terms[k - 1] holds phi_{z,k}

    const PatchGrid<BCVector>& term(int k) const;
};

HarmonicSequence build_sequence(const ConnectionField& conn, std::complex<double> centre,
                                const SequenceOptions& options = {});

// eta_{alpha,beta} = q^C(phi_{z,alpha}, phi_{zbar,beta}), on the largest patch both terms share.
PatchGrid<BiComplex> eta_pairing(const HarmonicSequence& seq, int alpha, int beta);
double max_abs(const PatchGrid<BiComplex>& grid);

struct OrderReport {
    int order = 0;
    bool capped = false;        // every reachable pairing vanished; order is a lower bound
    double first_nonzero = 0.0;  // max |eta| at alpha + beta = order + 1
    double scale = 0.0;          // |phi_z|^2-scale used to make tol relative
};

// Largest gamma with max |eta_{alpha,beta}| < tol * scale for every alpha + beta <= gamma.
OrderReport isotropic_order(const HarmonicSequence& seq, double tol = 1e-6);

struct DifferentialReport {
    PatchGrid<BiComplex> top;             // eta_{2m,1}
    double holomorphy_residual = 0.0;     // max |d/dzbar eta_{2m,1}|
    double q_mismatch = 0.0;              // max |eta_{m+1,m} - expected_mid_pairing| over both parts
    double sign_alternation = 0.0;        // max |eta_{a,b} - (-1)^{b-1} eta_{2m,1}|, a + b = 2m+1
    std::complex<double> q_centre;        // q_{2m+1} at the centre
    BiComplex eta_mid_centre;             // eta_{m+1,m} at the centre
};

// Value of eta_{m+1,m} predicted from q_{2m+1}: -q_{2m+1} up to the unit (-1)^m tau that the
// tau-conjugate second slot of q produces on tau^m L_m x tau^{m-1} L_m.
BiComplex expected_mid_pairing(int m, std::complex<double> q);

// Throws std::runtime_error unless the isotropic order equals 2m.
DifferentialReport extract_differential(const HarmonicSequence& seq, const ConnectionField& conn, double tol = 1e-6);

// Max over alpha <= max_alpha and the patch of the component of nabla_{d/dzbar} phi_{z,alpha}
// outside span{phi_{z,j}, P phi_{z,j} : j < alpha}.
double span_residual(const HarmonicSequence& seq, int max_alpha);

// Sine of the angle between phi_{z,k} and span{phi_{z,k-1}, tau^{k-1}(u_k - i v_k)} at the centre, k <= m.
double sequence_direction_defect(const HarmonicSequence& seq, int k);

}  // namespace phl

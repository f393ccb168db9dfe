#pragma once

#include <string>
#include <vector>

#include "phl/higgs.hpp"
#include "phl/torus.hpp"

namespace phl {

// u_i = log h_i for i = 1..m.
struct MetricSolution {
    std::vector<RealGrid> u;

    int m() const { return static_cast<int>(u.size()); }
    RealGrid h(int i) const { return u.at(static_cast<std::size_t>(i - 1)).array().exp().matrix(); }
    static MetricSolution constant(int n, const std::vector<double>& h_values);
};

// Left-hand sides of the cyclic Hitchin system with d_z d_zbar = Laplacian / 4.
std::vector<RealGrid> hitchin_residual(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops,
                                       DiffBackend backend = DiffBackend::spectral);
double max_abs(const std::vector<RealGrid>& grids);

// Constant solution for constant |gamma_i|; throws std::invalid_argument if |gamma_m| = 0
// or an intermediate magnitude vanishes.
std::vector<double> solve_constant(int m, const std::vector<double>& gamma_mags);

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 50;
    DiffBackend backend = DiffBackend::spectral;
    double blowup = 50.0;
};

struct SolveLog {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;  // max norm, one entry per iterate
    std::vector<int> damping_halvings;
    std::string diagnostic;
};

struct SolveResult {
    MetricSolution solution;
    SolveLog log;
};

// Damped Newton in log variables. On non-convergence returns the best iterate with
// log.converged = false; throws std::runtime_error on blow-up (|u_i| > options.blowup).
SolveResult solve_pde(const HiggsData& data, const SpectralOps& ops, const SolveOptions& options = {});

struct MonotonicityReport {
    std::vector<double> laplacian_min;  // min over the grid of d_z d_zbar log h_i
    // chain[k] holds ||eta_{k+2}||^2 on the grid, k = 0..m-1
    std::vector<RealGrid> chain;
    std::vector<double> chain_max;
    bool all_subharmonic = false;  // every laplacian_min >= -slack
    bool chain_bounded = false;    // chain <= 1 everywhere (within slack)
    bool chain_ordered = false;    // non-increasing in k at every point (within slack)
    bool chain_strict = false;     // strict inequalities everywhere
};

MonotonicityReport monotonicity_report(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops,
                                       double slack = 1e-8);

// Pointwise squared norms of eta_2 .. eta_{m+1} from metric weights and gammas.
std::vector<double> eta_norms(const std::vector<double>& h, const std::vector<std::complex<double>>& gamma);

}  // namespace phl

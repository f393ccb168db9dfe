#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "phl/connection.hpp"
#include "phl/field.hpp"

namespace phl {

enum class NormalSide { plus, minus };

// Normal sections are written in the real local frame as (a; b) for a + tau b, a, b in R^{2m+1}.
// Indices of the block L_j in that representation.
std::array<Eigen::Index, 2> block_indices(int m, int j);
// Blocks of N+ = L_3 + L_5 + ... + L_{2m-1} or N- = L_2 + L_4 + ... + L_{2m}.
std::vector<int> normal_blocks(int m, NormalSide side);

// f(x, y) c with f the standard bump exp(-1 / (1 - r^2 / rho^2)).
struct BumpSection {
    std::complex<double> centre;
    double radius = 0.1;
    Eigen::VectorXd coeffs;  // length 2(2m+1)

    double value(double x, double y) const;
    std::array<double, 2> gradient(double x, double y) const;
};

BumpSection random_bump(int m, NormalSide side, std::complex<double> centre, double radius, std::mt19937_64& rng);

struct VariationTerms {
    double a = 0.0;  // connection energy inside N+-
    double b = 0.0;  // Gamma_0 part, landing in the opposite normal summand
    double c = 0.0;  // shape-operator part, landing in TS
    double d = 0.0;  // curvature trace
    double total() const { return a + b - c + d; }
};

// Integrand at one point; throws std::invalid_argument if xi has a tangential or sigma component
// above 1e-8 or does not lie in the requested normal summand.
VariationTerms variation_integrand(const LocalConnection& conn, double h1, const Eigen::VectorXd& coeffs,
                                   NormalSide side, double f, double fx, double fy);

struct VariationReport {
    std::vector<VariationTerms> samples;
    int support_points = 0;
    double total_min = 0.0;
    double total_max = 0.0;
    bool sign_ok = false;  // strict expected sign at every support point
};

VariationReport second_variation(const ConnectionField& conn, const BumpSection& xi, NormalSide side,
                                 int grid_points = 21);

// Eigenvalues of the term-(b) quadratic form on the fibre of N+- (orthonormal block frame), ascending.
std::vector<double> term_b_eigenvalues(const LocalConnection& conn, double h1, NormalSide side);
// The closed-form list built from ||eta_j||^2, ascending, each value twice. Requires m >= 2.
std::vector<double> term_b_closed_form(const FieldSample& sample, NormalSide side);

}  // namespace phl

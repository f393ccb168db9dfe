#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "phl/torus.hpp"

namespace phl {

// Cyclic Higgs bundle data of rank 2m+1 with the first entry normalised to 1.
struct HiggsData {
    int m = 1;
    int genus = 2;
    int degree = 0;
    std::vector<ComplexGrid> gammas;  // gamma_1 ... gamma_m, all n x n
    bool mu_is_one = true;

    // Shapes and counts; throws std::invalid_argument.
    void validate() const;
    Eigen::Index resolution() const;
    const ComplexGrid& gamma(int i) const;  // 1-based
    bool gamma_vanishes(int i, double tol = 1e-14) const;
    // gamma_1 ... gamma_{m-1} nowhere identically zero.
    bool chain_nonvanishing(double tol = 1e-14) const;

    static HiggsData constant(int n, const std::vector<std::complex<double>>& values);
    // gamma_i = 1 for i < m, gamma_m = top.
    static HiggsData hitchin_preset(int m, int n, const ComplexGrid& top);
};

enum class Stability { stable, strictly_polystable, unstable, empty };
std::string to_string(Stability s);

// Throws std::invalid_argument unless m >= 2 and g >= 2.
Stability stability_classify(int m, int genus, int degree, bool gamma_m_is_zero,
                             bool gamma_prev_is_zero = false);

struct ModuliReport {
    enum class Status { empty, stratum };
    Status status = Status::empty;
    long bundle_rank = 0;
    long base_dim = 0;
    long total_dim = 0;
    long cover_cardinality = 1;
    std::string cover_note;
};

ModuliReport moduli_dimensions(int m, int genus, int degree);

// Diagonal gauge scalings lambda_1 = 1, lambda_2 ... lambda_m relating a to b, if any.
std::optional<std::vector<std::complex<double>>> gauge_equivalent(const HiggsData& a, const HiggsData& b,
                                                                  double tol = 1e-10);
HiggsData apply_gauge(const HiggsData& data, const std::vector<std::complex<double>>& lambdas);

// (gamma_1 ... gamma_{m-1})^2 gamma_m.
ComplexGrid q_differential(const HiggsData& data);

}  // namespace phl

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "phl/higgs.hpp"
#include "phl/solver.hpp"
#include "phl/torus.hpp"

namespace phl {

// Metric weights, their log-gradients and the Higgs coefficients at one point.
struct FieldSample {
    std::vector<double> h;        // h_1 .. h_m
    std::vector<double> dlogh_x;  // d/dx log h_i
    std::vector<double> dlogh_y;
    std::vector<std::complex<double>> gamma;  // gamma_1 .. gamma_m

    int m() const { return static_cast<int>(h.size()); }
};

// A solution of the cyclic Hitchin system that can be evaluated anywhere in its domain.
class HiggsField {
public:
    virtual ~HiggsField() = default;
    virtual int m() const = 0;
    virtual FieldSample sample(double x, double y) const = 0;
    virtual std::string name() const = 0;
    // Whether gamma_i are holomorphic (the assembled connection is then flat).
    virtual bool holomorphic() const { return true; }
    // Largest radius around the origin where the field may be sampled.
    virtual double domain_radius() const { return 1e300; }
};

class ConstantField final : public HiggsField {
public:
    ConstantField(std::vector<double> h, std::vector<std::complex<double>> gamma);
    // Uses the constant solution of the Hitchin system.
    static ConstantField from_gammas(const std::vector<std::complex<double>>& gamma);

    int m() const override { return static_cast<int>(h_.size()); }
    FieldSample sample(double x, double y) const override;
    std::string name() const override { return "constant"; }

private:
    std::vector<double> h_;
    std::vector<std::complex<double>> gamma_;
};

// Trigonometric interpolation of a converged torus solution.
class TorusField final : public HiggsField {
public:
    TorusField(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops);

    int m() const override { return static_cast<int>(u_.size()); }
    FieldSample sample(double x, double y) const override;
    std::string name() const override { return "torus"; }
    bool holomorphic() const override { return holomorphic_; }

private:
    std::vector<FourierInterpolant> u_;
    std::vector<FourierInterpolant> gamma_;
    bool holomorphic_ = false;
};

// The constant Hitchin-preset solution (gamma_i = 1, gamma_m = top) pulled back by
// w = z + a z^2 / 2; non-constant, still an exact solution away from z = -1/a.
class ChartField final : public HiggsField {
public:
    ChartField(int m, std::complex<double> top, std::complex<double> a);

    int m() const override { return static_cast<int>(h0_.size()); }
    FieldSample sample(double x, double y) const override;
    std::string name() const override { return "chart"; }
    double domain_radius() const override;

private:
    std::vector<double> h0_;
    std::complex<double> top_;
    std::complex<double> a_;
};

// Uniformising solution on the unit disk: gamma_i = 1 (i < m), gamma_m = 0,
// h_j = C_j P^j with P = 2 / (1 - |z|^2)^2 and C_j / C_{j-1} = j + ... + m.
class FuchsianField final : public HiggsField {
public:
    explicit FuchsianField(int m);

    int m() const override { return static_cast<int>(coeff_.size()); }
    FieldSample sample(double x, double y) const override;
    std::string name() const override { return "fuchsian"; }
    double domain_radius() const override { return 1.0; }
    const std::vector<double>& coefficients() const { return coeff_; }

private:
    std::vector<double> coeff_;
};

// Strictly polystable rank-5 example on the disk: gamma_1 = 0, gamma_2 = c,
// h_1 = P, h_2 = |c| (1 - |z|^2).
class SplitField final : public HiggsField {
public:
    explicit SplitField(std::complex<double> top);

    int m() const override { return 2; }
    FieldSample sample(double x, double y) const override;
    std::string name() const override { return "split"; }
    double domain_radius() const override { return 1.0; }

private:
    std::complex<double> top_;
};

}  // namespace phl

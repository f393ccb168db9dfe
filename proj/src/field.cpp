#include "phl/field.hpp"

#include <cmath>
#include <stdexcept>

namespace phl {

namespace {

void require_disk(double x, double y) {
    if (x * x + y * y >= 1.0) throw std::domain_error("field sampled outside the unit disk");
}

}  // namespace

ConstantField::ConstantField(std::vector<double> h, std::vector<std::complex<double>> gamma)
    : h_(std::move(h)), gamma_(std::move(gamma)) {
    if (h_.empty() || h_.size() != gamma_.size()) {
        throw std::invalid_argument("ConstantField: need m metric weights and m gammas");
    }
    for (double v : h_) {
        if (!(v > 0.0)) throw std::invalid_argument("ConstantField: metric weights must be positive");
    }
}

ConstantField ConstantField::from_gammas(const std::vector<std::complex<double>>& gamma) {
    std::vector<double> mags;
    for (const auto& g : gamma) mags.push_back(std::abs(g));
    return {solve_constant(static_cast<int>(gamma.size()), mags), gamma};
}

FieldSample ConstantField::sample(double, double) const {
    const std::size_t m = h_.size();
    return {h_, std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), gamma_};
}

TorusField::TorusField(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops) {
    data.validate();
    if (sol.m() != data.m) throw std::invalid_argument("TorusField: m mismatch");
    for (const auto& u : sol.u) u_.emplace_back(ops, u.cast<std::complex<double>>());
    bool holo = true;
    for (const auto& g : data.gammas) {
        gamma_.emplace_back(ops, g);
        // d/dzbar = (dx + i dy) / 2 must vanish.
        const ComplexGrid dbar = 0.5 * (ops.dx(g) + std::complex<double>(0.0, 1.0) * ops.dy(g));
        holo = holo && dbar.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff());
    }
    holomorphic_ = holo;
}

FieldSample TorusField::sample(double x, double y) const {
    FieldSample s;
    for (const auto& u : u_) {
        const auto v = u(x, y);
        s.h.push_back(std::exp(v.value.real()));
        s.dlogh_x.push_back(v.dx.real());
        s.dlogh_y.push_back(v.dy.real());
    }
    for (const auto& g : gamma_) s.gamma.push_back(g(x, y).value);
    return s;
}

ChartField::ChartField(int m, std::complex<double> top, std::complex<double> a) : top_(top), a_(a) {
    std::vector<std::complex<double>> gamma(static_cast<std::size_t>(m), 1.0);
    gamma.back() = top;
    std::vector<double> mags;
    for (const auto& g : gamma) mags.push_back(std::abs(g));
    h0_ = solve_constant(m, mags);
}

double ChartField::domain_radius() const { return std::abs(a_) == 0.0 ? 1e300 : 1.0 / std::abs(a_); }

FieldSample ChartField::sample(double x, double y) const {
    const std::complex<double> z(x, y);
    const std::complex<double> fp = 1.0 + a_ * z;  // derivative of the chart map
    if (std::abs(fp) < 1e-12) throw std::domain_error("ChartField: chart is singular here");
    const std::complex<double> ratio = a_ / fp;  // f'' / f'
    const double gx = 2.0 * ratio.real();        // d/dx log |f'|^2
    const double gy = -2.0 * ratio.imag();
    const double abs2 = std::norm(fp);
    const int m = this->m();
    FieldSample s;
    for (int i = 1; i <= m; ++i) {
        s.h.push_back(h0_[static_cast<std::size_t>(i - 1)] * std::pow(abs2, i));
        s.dlogh_x.push_back(i * gx);
        s.dlogh_y.push_back(i * gy);
        s.gamma.emplace_back(1.0);
    }
    s.gamma.back() = top_ * std::pow(fp, 2 * m + 1);
    return s;
}

FuchsianField::FuchsianField(int m) {
    if (m < 1) throw std::invalid_argument("FuchsianField: m must be positive");
    double c = 1.0;
    for (int j = 1; j <= m; ++j) {
        c *= (j + m) * (m - j + 1) / 2.0;  // j + (j+1) + ... + m
        coeff_.push_back(c);
    }
}

FieldSample FuchsianField::sample(double x, double y) const {
    require_disk(x, y);
    const double r2 = x * x + y * y;
    const double p = 2.0 / ((1.0 - r2) * (1.0 - r2));
    // d log P = 4 (x, y) / (1 - r^2)
    const double px = 4.0 * x / (1.0 - r2);
    const double py = 4.0 * y / (1.0 - r2);
    const int m = this->m();
    FieldSample s;
    for (int j = 1; j <= m; ++j) {
        s.h.push_back(coeff_[static_cast<std::size_t>(j - 1)] * std::pow(p, j));
        s.dlogh_x.push_back(j * px);
        s.dlogh_y.push_back(j * py);
        s.gamma.emplace_back(j < m ? 1.0 : 0.0);
    }
    return s;
}

SplitField::SplitField(std::complex<double> top) : top_(top) {
    if (std::abs(top) == 0.0) throw std::invalid_argument("SplitField: gamma_2 must be nonzero");
}

FieldSample SplitField::sample(double x, double y) const {
    require_disk(x, y);
    const double r2 = x * x + y * y;
    const double p = 2.0 / ((1.0 - r2) * (1.0 - r2));
    FieldSample s;
    s.h = {p, std::abs(top_) * (1.0 - r2)};
    s.dlogh_x = {4.0 * x / (1.0 - r2), -2.0 * x / (1.0 - r2)};
    s.dlogh_y = {4.0 * y / (1.0 - r2), -2.0 * y / (1.0 - r2)};
    s.gamma = {0.0, top_};
    return s;
}

}  // namespace phl

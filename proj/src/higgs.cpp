#include "phl/higgs.hpp"

#include <cmath>
#include <stdexcept>

namespace phl {

void HiggsData::validate() const {
    if (m < 1) throw std::invalid_argument("HiggsData: m must be positive");
    if (static_cast<int>(gammas.size()) != m) {
        throw std::invalid_argument("HiggsData: expected exactly m gamma grids");
    }
    for (const auto& g : gammas) {
        if (g.rows() != gammas.front().rows() || g.cols() != gammas.front().cols() || g.rows() != g.cols()) {
            throw std::invalid_argument("HiggsData: gamma grids must be square and of equal size");
        }
    }
    if (!mu_is_one) throw std::invalid_argument("HiggsData: only mu = 1 is supported");
}

Eigen::Index HiggsData::resolution() const { return gammas.empty() ? 0 : gammas.front().rows(); }

const ComplexGrid& HiggsData::gamma(int i) const {
    if (i < 1 || i > m) throw std::out_of_range("HiggsData::gamma index");
    return gammas[static_cast<std::size_t>(i - 1)];
}

bool HiggsData::gamma_vanishes(int i, double tol) const { return gamma(i).cwiseAbs().maxCoeff() <= tol; }

bool HiggsData::chain_nonvanishing(double tol) const {
    for (int i = 1; i < m; ++i) {
        if (gamma_vanishes(i, tol)) return false;
    }
    return true;
}

HiggsData HiggsData::constant(int n, const std::vector<std::complex<double>>& values) {
    HiggsData d;
    d.m = static_cast<int>(values.size());
    for (const auto& v : values) d.gammas.push_back(ComplexGrid::Constant(n, n, v));
    d.validate();
    return d;
}

HiggsData HiggsData::hitchin_preset(int m, int n, const ComplexGrid& top) {
    HiggsData d;
    d.m = m;
    for (int i = 1; i < m; ++i) d.gammas.push_back(ComplexGrid::Constant(n, n, 1.0));
    d.gammas.push_back(top);
    d.validate();
    return d;
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::strictly_polystable: return "strictly_polystable";
        case Stability::unstable: return "unstable";
        case Stability::empty: return "empty";
    }
    return "unknown";
}

namespace {

void require_valid(int m, int genus) {
    if (m < 2) throw std::invalid_argument("m must be at least 2");
    if (genus < 2) throw std::invalid_argument("genus must be at least 2");
}

}  // namespace

Stability stability_classify(int m, int genus, int degree, bool gamma_m_is_zero, bool gamma_prev_is_zero) {
    require_valid(m, genus);
    const int top = m * (2 * genus - 2);
    if (degree > top) return Stability::empty;
    if (gamma_m_is_zero) {
        // d <= 0 leaves a phi-invariant subbundle of non-negative degree.
        return degree > 0 ? Stability::stable : Stability::unstable;
    }
    if (degree < 1 - genus) return Stability::empty;
    if (gamma_prev_is_zero && degree <= 0) return Stability::strictly_polystable;
    return Stability::stable;
}

ModuliReport moduli_dimensions(int m, int genus, int degree) {
    require_valid(m, genus);
    ModuliReport r;
    const long g = genus;
    const long d = degree;
    const long top = static_cast<long>(m) * (2 * g - 2);
    if (d > 0 && d <= top) {
        r.status = ModuliReport::Status::stratum;
        r.bundle_rank = 2 * d + g - 1;
        r.base_dim = top - d;
        r.total_dim = r.bundle_rank + r.base_dim;
        r.cover_note = "holomorphic vector bundle over the symmetric product S^" + std::to_string(r.base_dim) + "(X)";
    } else if (d >= 1 - g && d <= 0) {
        r.status = ModuliReport::Status::stratum;
        r.bundle_rank = (2 * static_cast<long>(m) - 1) * (g - 1) - d;
        r.base_dim = 2 * d + 2 * g - 2;
        r.total_dim = r.bundle_rank + r.base_dim;
        r.cover_cardinality = 1L << (2 * g);
        r.cover_note = "complex fiber dimension " + std::to_string(r.bundle_rank) +
                       " (punctured vector space modulo +-Id) over a " + std::to_string(r.cover_cardinality) +
                       "-sheeted cover of S^" + std::to_string(r.base_dim) + "(X)";
    } else {
        r.status = ModuliReport::Status::empty;
        r.cover_note = "empty: degree outside [1-g, m(2g-2)]";
    }
    return r;
}

namespace {

// Constant c with b = c a on the grid, if it exists.
std::optional<std::complex<double>> constant_ratio(const ComplexGrid& a, const ComplexGrid& b, double tol) {
    Eigen::Index bi = 0, bj = 0;
    a.cwiseAbs().maxCoeff(&bi, &bj);
    const std::complex<double> c = b(bi, bj) / a(bi, bj);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if ((b - c * a).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
    return c;
}

}  // namespace

std::optional<std::vector<std::complex<double>>> gauge_equivalent(const HiggsData& a, const HiggsData& b,
                                                                  double tol) {
    a.validate();
    b.validate();
    if (a.m != b.m || a.resolution() != b.resolution()) {
        throw std::invalid_argument("gauge_equivalent: data of different shape");
    }
    const int m = a.m;
    // Consecutive lambdas are tied by gamma'_i = lambda_i^-1 lambda_{i+1} gamma_i unless both vanish.
    std::vector<std::optional<std::complex<double>>> ratio(static_cast<std::size_t>(m));
    for (int i = 1; i < m; ++i) {
        const bool za = a.gamma_vanishes(i, tol);
        const bool zb = b.gamma_vanishes(i, tol);
        if (za != zb) return std::nullopt;
        if (za) continue;
        const auto c = constant_ratio(a.gamma(i), b.gamma(i), tol);
        if (!c || std::abs(*c) <= tol) return std::nullopt;
        ratio[static_cast<std::size_t>(i)] = *c;
    }
    std::vector<std::complex<double>> lambda(static_cast<std::size_t>(m) + 1, 1.0);  // 1-based
    std::vector<bool> anchored(static_cast<std::size_t>(m) + 1, false);
    anchored[1] = true;
    for (int i = 1; i < m; ++i) {
        const auto& r = ratio[static_cast<std::size_t>(i)];
        lambda[static_cast<std::size_t>(i + 1)] = r ? lambda[static_cast<std::size_t>(i)] * *r : 1.0;
        anchored[static_cast<std::size_t>(i + 1)] = r && anchored[static_cast<std::size_t>(i)];
    }
    const bool zm_a = a.gamma_vanishes(m, tol);
    const bool zm_b = b.gamma_vanishes(m, tol);
    if (zm_a != zm_b) return std::nullopt;
    if (!zm_a) {
        const auto c = constant_ratio(a.gamma(m), b.gamma(m), tol);
        if (!c || std::abs(*c) <= tol) return std::nullopt;
        // gamma'_m = lambda_m^-2 gamma_m
        const std::complex<double> target = 1.0 / std::sqrt(*c);
        if (!anchored[static_cast<std::size_t>(m)]) {
            // The last free segment can be rescaled to meet the corner constraint.
            int start = m;
            while (start > 1 && ratio[static_cast<std::size_t>(start - 1)]) --start;
            const std::complex<double> factor = target / lambda[static_cast<std::size_t>(m)];
            for (int i = start; i <= m; ++i) lambda[static_cast<std::size_t>(i)] *= factor;
        } else {
            const std::complex<double> lm = lambda[static_cast<std::size_t>(m)];
            if (std::abs(lm * lm * *c - 1.0) > std::sqrt(tol)) return std::nullopt;
        }
    }
    std::vector<std::complex<double>> out(lambda.begin() + 1, lambda.end());
    // Final check against the definition.
    const HiggsData mapped = apply_gauge(a, out);
    for (int i = 1; i <= m; ++i) {
        const double scale = std::max(1.0, b.gamma(i).cwiseAbs().maxCoeff());
        if ((mapped.gamma(i) - b.gamma(i)).cwiseAbs().maxCoeff() > 10.0 * tol * scale) return std::nullopt;
    }
    return out;
}

HiggsData apply_gauge(const HiggsData& data, const std::vector<std::complex<double>>& lambdas) {
    data.validate();
    if (static_cast<int>(lambdas.size()) != data.m) {
        throw std::invalid_argument("apply_gauge: expected m scalings");
    }
    HiggsData out = data;
    for (int i = 1; i < data.m; ++i) {
        out.gammas[static_cast<std::size_t>(i - 1)] =
            data.gamma(i) * (lambdas[static_cast<std::size_t>(i)] / lambdas[static_cast<std::size_t>(i - 1)]);
    }
    const std::complex<double> lm = lambdas.back();
    out.gammas.back() = data.gamma(data.m) / (lm * lm);
    return out;
}

ComplexGrid q_differential(const HiggsData& data) {
    data.validate();
    const Eigen::Index n = data.resolution();
    ComplexGrid prod = ComplexGrid::Ones(n, n);
    for (int i = 1; i < data.m; ++i) prod = prod.cwiseProduct(data.gamma(i));
    return prod.cwiseProduct(prod).cwiseProduct(data.gamma(data.m));
}

}  // namespace phl

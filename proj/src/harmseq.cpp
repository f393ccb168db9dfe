#include "phl/harmseq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "phl/parallel.hpp"

namespace phl {

namespace {

constexpr int kStencilRadius = 4;
constexpr std::array<double, 4> kStencil{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

const std::complex<double> kI(0.0, 1.0);

// d/dz (sign = -1) or d/dzbar (sign = +1) of a grid, eighth-order centred differences.
template <typename T>
PatchGrid<T> wirtinger(const PatchGrid<T>& in, double spacing, double sign) {
    if (in.half < kStencilRadius) throw std::invalid_argument("harmonic sequence: patch too small for the stencil");
    PatchGrid<T> out;
    out.half = in.half - kStencilRadius;
    out.values.resize(static_cast<std::size_t>(out.side() * out.side()));
    const double scale = 0.5 / spacing;
    for (int j = -out.half; j <= out.half; ++j) {
        for (int i = -out.half; i <= out.half; ++i) {
            T dx = (in.at(i + 1, j) - in.at(i - 1, j));
            T dy = (in.at(i, j + 1) - in.at(i, j - 1));
            dx = std::complex<double>(kStencil[0]) * dx;
            dy = std::complex<double>(kStencil[0]) * dy;
            for (int s = 2; s <= kStencilRadius; ++s) {
                const std::complex<double> w(kStencil[static_cast<std::size_t>(s - 1)]);
                dx += w * (in.at(i + s, j) - in.at(i - s, j));
                dy += w * (in.at(i, j + s) - in.at(i, j - s));
            }
            out.at(i, j) = std::complex<double>(scale) * (dx + (sign * kI) * dy);
        }
    }
    return out;
}

BCVector project_off(const BCVector& v, const PCVector& sigma) {
    // q(sigma, sigma) = -1, so v + q(v, sigma) sigma is q-orthogonal to C_tau sigma.
    const BCVector s = BCVector::from(sigma);
    return v + qc_form(v, s) * s;
}

double abs_max(const BiComplex& z) { return std::max(std::abs(z.plus), std::abs(z.minus)); }

// Residual of least squares of v onto the columns, in one idempotent part.
double ls_residual(const Eigen::MatrixXcd& cols, const Eigen::VectorXcd& v) {
    if (cols.cols() == 0) return v.norm();
    const Eigen::VectorXcd coef = cols.completeOrthogonalDecomposition().solve(v);
    return (v - cols * coef).norm();
}

}  // namespace

BiComplex expected_mid_pairing(int m, std::complex<double> q) {
    // -q times the unit (-1)^m tau; tau is (1, -1) in idempotent coordinates.
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    return {-sign * q, sign * q};
}

const PatchGrid<BCVector>& HarmonicSequence::term(int k) const {
    if (k < 1 || k > depth) throw std::out_of_range("harmonic sequence: term index");
    return terms[static_cast<std::size_t>(k - 1)];
}

HarmonicSequence build_sequence(const ConnectionField& conn, std::complex<double> centre,
                                const SequenceOptions& options) {
    const int m = conn.m();
    const int depth = options.depth > 0 ? options.depth : 2 * m + 2;
    if (depth > 2 * m + 2) throw std::invalid_argument("build_sequence: depth exceeds 2m + 2");
    if (!(options.spacing > 0.0)) throw std::invalid_argument("build_sequence: spacing must be positive");
    HarmonicSequence seq;
    seq.m = m;
    seq.depth = depth;
    seq.spacing = options.spacing;
    seq.centre = centre;
    // One spare stencil level so d/dzbar of the deepest pairing is available.
    const int half = kStencilRadius * (depth + 1);
    const double reach = std::abs(centre) + std::sqrt(2.0) * half * options.spacing;
    if (reach >= conn.field().domain_radius()) throw std::invalid_argument("build_sequence: patch leaves the domain");

    seq.frames.half = half;
    seq.frames.values.resize(static_cast<std::size_t>(seq.frames.side() * seq.frames.side()));
    TransportOptions topts;
    topts.step = options.step;
    auto node = [&](int i, int j) { return centre + options.spacing * std::complex<double>(i, j); };
    seq.frames.at(0, 0) = initial_frame(m);
    for (int i = 1; i <= half; ++i) {
        seq.frames.at(i, 0) = transport_segment(conn, seq.frames.at(i - 1, 0), node(i - 1, 0), node(i, 0), topts);
        seq.frames.at(-i, 0) = transport_segment(conn, seq.frames.at(-i + 1, 0), node(-i + 1, 0), node(-i, 0), topts);
    }
    parallel_for(0, static_cast<std::size_t>(seq.frames.side()), [&](std::size_t col) {
        const int i = static_cast<int>(col) - half;
        for (int j = 1; j <= half; ++j) {
            seq.frames.at(i, j) = transport_segment(conn, seq.frames.at(i, j - 1), node(i, j - 1), node(i, j), topts);
            seq.frames.at(i, -j) = transport_segment(conn, seq.frames.at(i, -j + 1), node(i, -j + 1), node(i, -j), topts);
        }
    });

    seq.sigma.half = half;
    seq.sigma.values.reserve(seq.frames.values.size());
    PatchGrid<BCVector> level;
    level.half = half;
    for (const PCMatrix& f : seq.frames.values) {
        seq.sigma.values.push_back(to_ambient(f, sigma_local(m)));
        level.values.push_back(BCVector::from(seq.sigma.values.back()));
    }
    for (int k = 1; k <= depth; ++k) {
        PatchGrid<BCVector> next = wirtinger(level, options.spacing, -1.0);
        for (int j = -next.half; j <= next.half; ++j) {
            for (int i = -next.half; i <= next.half; ++i) next.at(i, j) = project_off(next.at(i, j), seq.sigma.at(i, j));
        }
        seq.terms.push_back(next);
        level = std::move(next);
    }
    return seq;
}

PatchGrid<BiComplex> eta_pairing(const HarmonicSequence& seq, int alpha, int beta) {
    const auto& a = seq.term(alpha);
    const auto& b = seq.term(beta);
    PatchGrid<BiComplex> out;
    out.half = std::min(a.half, b.half);
    out.values.resize(static_cast<std::size_t>(out.side() * out.side()));
    for (int j = -out.half; j <= out.half; ++j) {
        for (int i = -out.half; i <= out.half; ++i) {
            out.at(i, j) = qc_form(a.at(i, j), b.at(i, j).complex_conj());
        }
    }
    return out;
}

double max_abs(const PatchGrid<BiComplex>& grid) {
    double worst = 0.0;
    for (const auto& z : grid.values) worst = std::max(worst, abs_max(z));
    return worst;
}

OrderReport isotropic_order(const HarmonicSequence& seq, double tol) {
    OrderReport rep;
    const auto& first = seq.term(1);
    for (const auto& v : first.values) rep.scale = std::max(rep.scale, abs_max(qc_form(v, v)));
    const double threshold = tol * std::max(1.0, rep.scale);
    // alpha + beta ranges up to depth + 1 with beta >= 1.
    for (int total = 2; total <= seq.depth + 1; ++total) {
        double worst = 0.0;
        for (int alpha = 1; alpha < total; ++alpha) worst = std::max(worst, max_abs(eta_pairing(seq, alpha, total - alpha)));
        if (worst >= threshold) {
            rep.order = total - 1;
            rep.first_nonzero = worst;
            return rep;
        }
    }
    rep.order = seq.depth + 1;
    rep.capped = true;
    return rep;
}

DifferentialReport extract_differential(const HarmonicSequence& seq, const ConnectionField& conn, double tol) {
    const int m = seq.m;
    const OrderReport order = isotropic_order(seq, tol);
    if (order.order != 2 * m) {
        throw std::runtime_error("extract_differential: isotropic order " + std::to_string(order.order) +
                                 " differs from " + std::to_string(2 * m));
    }
    DifferentialReport rep;
    rep.top = eta_pairing(seq, 2 * m, 1);
    const auto dbar = wirtinger(rep.top, seq.spacing, 1.0);
    rep.holomorphy_residual = max_abs(dbar);

    for (int alpha = 1; alpha <= 2 * m; ++alpha) {
        const int beta = 2 * m + 1 - alpha;
        const auto eta = eta_pairing(seq, alpha, beta);
        const double sign = (beta - 1) % 2 == 0 ? 1.0 : -1.0;
        const int half = std::min(eta.half, rep.top.half);
        for (int j = -half; j <= half; ++j) {
            for (int i = -half; i <= half; ++i) {
                rep.sign_alternation = std::max(rep.sign_alternation, abs_max(eta.at(i, j) - BiComplex{sign, sign} * rep.top.at(i, j)));
            }
        }
    }

    const auto mid = eta_pairing(seq, m + 1, m);
    for (int j = -mid.half; j <= mid.half; ++j) {
        for (int i = -mid.half; i <= mid.half; ++i) {
            const std::complex<double> z = seq.centre + seq.spacing * std::complex<double>(i, j);
            const FieldSample s = conn.field().sample(z.real(), z.imag());
            std::complex<double> prod = 1.0;
            for (int k = 0; k + 1 < m; ++k) prod *= s.gamma[static_cast<std::size_t>(k)];
            const std::complex<double> q = prod * prod * s.gamma[static_cast<std::size_t>(m - 1)];
            if (i == 0 && j == 0) {
                rep.q_centre = q;
                rep.eta_mid_centre = mid.at(0, 0);
            }
            rep.q_mismatch = std::max(rep.q_mismatch, abs_max(mid.at(i, j) - expected_mid_pairing(m, q)));
        }
    }
    return rep;
}

double span_residual(const HarmonicSequence& seq, int max_alpha) {
    if (max_alpha >= seq.depth) throw std::invalid_argument("span_residual: needs one term beyond max_alpha");
    double worst = 0.0;
    for (int alpha = 1; alpha <= max_alpha; ++alpha) {
        const auto dbar = wirtinger(seq.term(alpha), seq.spacing, 1.0);
        for (int j = -dbar.half; j <= dbar.half; ++j) {
            for (int i = -dbar.half; i <= dbar.half; ++i) {
                const BCVector v = project_off(dbar.at(i, j), seq.sigma.at(i, j));
                const Eigen::Index n = v.size();
                // P acts as +1 / -1 on the idempotent parts, so the span splits part by part.
                Eigen::MatrixXcd plus(n, alpha - 1), minus(n, alpha - 1);
                for (int k = 1; k < alpha; ++k) {
                    plus.col(k - 1) = seq.term(k).at(i, j).plus;
                    minus.col(k - 1) = seq.term(k).at(i, j).minus;
                }
                const double r = std::hypot(ls_residual(plus, v.plus), ls_residual(minus, v.minus));
                worst = std::max(worst, r);
            }
        }
    }
    return worst;
}

double sequence_direction_defect(const HarmonicSequence& seq, int k) {
    const int m = seq.m;
    if (k < 1 || k > m || k > seq.depth) throw std::out_of_range("sequence_direction_defect: k");
    const PCMatrix& frame = seq.frames.at(0, 0);
    const Eigen::Index dim = 2 * m + 1;
    Eigen::VectorXcd local = Eigen::VectorXcd::Zero(dim);
    local(LocalConnection::block_start(k)) = 1.0;
    local(LocalConnection::block_start(k) + 1) = -kI;
    const double parity = (k - 1) % 2 == 0 ? 1.0 : -1.0;
    const Eigen::VectorXcd target_plus = frame.plus.cast<std::complex<double>>() * local;
    const Eigen::VectorXcd target_minus = frame.minus.cast<std::complex<double>>() * (parity * local).reverse();
    const BCVector& v = seq.term(k).at(0, 0);
    double worst = 0.0;
    for (int part = 0; part < 2; ++part) {
        const Eigen::VectorXcd& vec = part == 0 ? v.plus : v.minus;
        Eigen::MatrixXcd cols(dim, k > 1 ? 2 : 1);
        cols.col(0) = part == 0 ? target_plus : target_minus;
        if (k > 1) cols.col(1) = part == 0 ? seq.term(k - 1).at(0, 0).plus : seq.term(k - 1).at(0, 0).minus;
        worst = std::max(worst, ls_residual(cols, vec) / vec.norm());
    }
    return worst;
}

}  // namespace phl

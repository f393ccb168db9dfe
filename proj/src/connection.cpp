#include "phl/connection.hpp"

#include <cmath>
#include <stdexcept>

namespace phl {

namespace {

// Rotation-like block for gamma: [[Re, -Im], [Im, Re]].
Eigen::Matrix2d rotation_block(std::complex<double> g) {
    Eigen::Matrix2d b;
    b << g.real(), -g.imag(), g.imag(), g.real();
    return b;
}

// Reflection-like block for the corner: [[Re, -Im], [-Im, -Re]].
Eigen::Matrix2d reflection_block(std::complex<double> g) {
    Eigen::Matrix2d b;
    b << g.real(), -g.imag(), -g.imag(), -g.real();
    return b;
}

Eigen::Matrix2d quarter_turn() {
    Eigen::Matrix2d j;
    j << 0.0, -1.0, 1.0, 0.0;
    return j;
}

}  // namespace

Eigen::Matrix2d LocalConnection::gamma_block(int k, Direction d) const {
    if (k < 1 || k > m) throw std::out_of_range("gamma_block index");
    const Eigen::MatrixXd& mat = s(d);
    const Eigen::Index col = block_start(k);
    const Eigen::Index row = k < m ? block_start(k + 1) : col;
    return mat.block<2, 2>(row, col);
}

double LocalConnection::omega(int k, Direction d) const {
    if (k < 1 || k > m) throw std::out_of_range("omega index");
    const Eigen::Index b = block_start(k);
    return this->k(d)(b + 1, b);
}

LocalConnection assemble_local(const FieldSample& sample, const Corruption& corruption) {
    const int m = sample.m();
    if (m < 1 || static_cast<int>(sample.gamma.size()) != m || static_cast<int>(sample.dlogh_x.size()) != m ||
        static_cast<int>(sample.dlogh_y.size()) != m) {
        throw std::invalid_argument("assemble_local: inconsistent field sample");
    }
    LocalConnection c;
    c.m = m;
    const Eigen::Index dim = 2 * m + 1;
    c.kx = Eigen::MatrixXd::Zero(dim, dim);
    c.ky = Eigen::MatrixXd::Zero(dim, dim);
    c.sx = Eigen::MatrixXd::Zero(dim, dim);
    c.sy = Eigen::MatrixXd::Zero(dim, dim);

    for (int k = 1; k <= m; ++k) {
        const auto ks = static_cast<std::size_t>(k - 1);
        const Eigen::Index b = LocalConnection::block_start(k);
        // omega_k = (1/2) d_x log h_k dy - (1/2) d_y log h_k dx, placed as [[0, -w], [w, 0]].
        const double wx = -0.5 * sample.dlogh_y[ks];
        const double wy = 0.5 * sample.dlogh_x[ks];
        c.kx(b + 1, b) = wx;
        c.kx(b, b + 1) = -wx;
        c.ky(b + 1, b) = wy;
        c.ky(b, b + 1) = -wy;
    }

    const double root = std::sqrt(2.0 * sample.h[0]);
    c.sx(0, 1) = c.sx(1, 0) = root;
    c.sy(0, 2) = c.sy(2, 0) = root;

    const Eigen::Matrix2d turn = quarter_turn();
    for (int k = 1; k <= m; ++k) {
        const auto ks = static_cast<std::size_t>(k - 1);
        const Eigen::Index col = LocalConnection::block_start(k);
        Eigen::Matrix2d gx;
        Eigen::Index row = col;
        if (k < m) {
            gx = std::sqrt(sample.h[ks + 1] / sample.h[ks]) * rotation_block(sample.gamma[ks]);
            row = LocalConnection::block_start(k + 1);
        } else {
            gx = reflection_block(sample.gamma[ks]) / sample.h[ks];
        }
        Eigen::Matrix2d gy = gx * turn;
        if (k == 1 && corruption.flip_gamma1_y) gy(0, 1) = -gy(0, 1);
        c.sx.block<2, 2>(row, col) = gx;
        c.sy.block<2, 2>(row, col) = gy;
        if (row != col) {
            c.sx.block<2, 2>(col, row) = gx.transpose();
            c.sy.block<2, 2>(col, row) = gy.transpose();
        }
    }
    return c;
}

ConnectionField::ConnectionField(std::shared_ptr<const HiggsField> field, Corruption corruption)
    : field_(std::move(field)), corruption_(corruption) {
    if (!field_) throw std::invalid_argument("ConnectionField: null field");
}

ConnectionGrid assemble_connection(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops) {
    data.validate();
    const TorusGrid& grid = ops.grid();
    if (sol.m() != data.m || data.resolution() != grid.n()) {
        throw std::invalid_argument("assemble_connection: shape mismatch");
    }
    const int n = grid.n();
    std::vector<RealGrid> gx, gy;
    for (const auto& u : sol.u) {
        gx.push_back(ops.dx(u));
        gy.push_back(ops.dy(u));
    }
    ConnectionGrid out;
    out.n = n;
    out.nodes.reserve(static_cast<std::size_t>(grid.points()));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            FieldSample s;
            for (int k = 0; k < data.m; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                s.h.push_back(std::exp(sol.u[ks](i, j)));
                s.dlogh_x.push_back(gx[ks](i, j));
                s.dlogh_y.push_back(gy[ks](i, j));
                s.gamma.push_back(data.gamma(k + 1)(i, j));
            }
            out.nodes.push_back(assemble_local(s));
        }
    }
    return out;
}

double conformality_defect(const LocalConnection& conn, const std::vector<double>& angles) {
    double worst = 0.0;
    for (double t : angles) {
        const double cx = std::cos(t);
        const double cy = std::sin(t);
        for (int k = 1; k <= conn.m; ++k) {
            const Eigen::Matrix2d g = cx * conn.gamma_block(k, Direction::x) + cy * conn.gamma_block(k, Direction::y);
            const double scale = std::max(1.0, g.squaredNorm());
            const double ortho = std::abs(g.col(0).dot(g.col(1)));
            const double equal = std::abs(g.col(0).squaredNorm() - g.col(1).squaredNorm());
            worst = std::max(worst, std::max(ortho, equal) / scale);
        }
    }
    return worst;
}

}  // namespace phl

#include "phl/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phl/hspace.hpp"

namespace phl {

std::array<PCVector, 2> block_basis_local(int m, int j) {
    if (m < 1 || j < 1 || j > 2 * m) throw std::out_of_range("block_basis_local: block index");
    const int k = j <= m ? j : 2 * m + 1 - j;
    const bool odd_power = (j - 1) % 2 == 1;  // the tau exponent is j - 1 in both halves
    const Eigen::Index dim = 2 * m + 1;
    std::array<PCVector, 2> out;
    for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(LocalConnection::block_start(k) + c) = 1.0;
        out[static_cast<std::size_t>(c)] = PCVector(e, odd_power ? Eigen::VectorXd(-e) : e);
    }
    return out;
}

std::vector<std::array<PCVector, 2>> frenet_blocks(const PCMatrix& frame) {
    const int m = static_cast<int>((frame.size() - 1) / 2);
    std::vector<std::array<PCVector, 2>> out;
    for (int j = 1; j <= 2 * m; ++j) {
        const auto local = block_basis_local(m, j);
        out.push_back({to_ambient(frame, local[0]), to_ambient(frame, local[1])});
    }
    return out;
}

namespace {

double g_form(const PCVector& a, const PCVector& b) { return q_form(a, b).re; }

// Sine of the largest principal angle between span(a) and span(b), Euclidean in stacked coordinates.
double subspace_gap(const std::array<PCVector, 2>& a, const std::array<PCVector, 2>& b) {
    Eigen::MatrixXd ma(a[0].stacked().size(), 2), mb(b[0].stacked().size(), 2);
    for (int c = 0; c < 2; ++c) {
        ma.col(c) = a[static_cast<std::size_t>(c)].stacked();
        mb.col(c) = b[static_cast<std::size_t>(c)].stacked();
    }
    const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(ma).householderQ() *
                               Eigen::MatrixXd::Identity(ma.rows(), 2);
    const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(mb).householderQ() *
                               Eigen::MatrixXd::Identity(mb.rows(), 2);
    const Eigen::MatrixXd residual = qa - qb * (qb.transpose() * qa);
    return Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues()(0);
}

std::vector<std::complex<double>> patch(std::complex<double> centre, const FrenetOptions& o) {
    std::vector<std::complex<double>> pts;
    const int n = std::max(1, o.patch_points);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double sx = n == 1 ? 0.0 : -1.0 + 2.0 * a / (n - 1);
            const double sy = n == 1 ? 0.0 : -1.0 + 2.0 * b / (n - 1);
            pts.push_back(centre + o.patch_radius * std::complex<double>(sx, sy));
        }
    }
    return pts;
}

}  // namespace

Eigen::MatrixXd block_couplings(const ConnectionField& conn, const PCMatrix& frame, std::complex<double> point,
                                double delta) {
    const int m = conn.m();
    const int nb = 2 * m;
    TransportOptions opts;
    opts.step = delta;
    const HPoint sigma = sigma_of(frame);
    const auto here = frenet_blocks(frame);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nb, nb);
    for (const std::complex<double> dir : {std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0)}) {
        std::array<std::vector<std::array<PCVector, 2>>, 4> near;
        const double offsets[4] = {2.0, 1.0, -1.0, -2.0};
        for (int s = 0; s < 4; ++s) {
            near[static_cast<std::size_t>(s)] =
                frenet_blocks(transport_segment(conn, frame, point, point + offsets[s] * delta * dir, opts));
        }
        for (int i = 0; i < nb; ++i) {
            for (int a = 0; a < 2; ++a) {
                const auto ii = static_cast<std::size_t>(i);
                const auto aa = static_cast<std::size_t>(a);
                // Fourth-order centred difference.
                const PCVector d = (1.0 / (12.0 * delta)) *
                                   (8.0 * (near[1][ii][aa] - near[2][ii][aa]) - (near[0][ii][aa] - near[3][ii][aa]));
                const PCVector nabla = project_tangent(sigma, d).vec;
                for (int j = 0; j < nb; ++j) {
                    for (int b = 0; b < 2; ++b) {
                        const PCVector& e = here[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
                        const double coef = g_form(nabla, e) / g_form(e, e);
                        out(i, j) = std::max(out(i, j), std::abs(coef));
                    }
                }
            }
        }
    }
    return out;
}

FrenetReport frenet_verify(const ConnectionField& conn, std::complex<double> centre, const FrenetOptions& options) {
    const int m = conn.m();
    const int nb = 2 * m;
    FrenetReport rep;
    rep.m = m;
    rep.gram_min = 1e300;
    rep.adjacent_min = 1e300;
    const std::vector<double> angles = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0};
    const TransportOptions opts{options.delta};
    for (const auto& p : patch(centre, options)) {
        const PCMatrix frame = transport_segment(conn, initial_frame(m), centre, p, opts);
        const auto blocks = frenet_blocks(frame);
        for (int j = 1; j <= nb; ++j) {
            const auto& blk = blocks[static_cast<std::size_t>(j - 1)];
            Eigen::Matrix2d gram;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) gram(a, b) = g_form(blk[static_cast<std::size_t>(a)], blk[static_cast<std::size_t>(b)]);
            }
            const double sign = j % 2 == 1 ? 1.0 : -1.0;
            const Eigen::Matrix2d signed_gram = sign * gram;
            rep.gram_min = std::min(rep.gram_min, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(signed_gram).eigenvalues()(0));
            // omega(u, v) = g(u, P v) on the block
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double w = g_form(blk[static_cast<std::size_t>(a)], blk[static_cast<std::size_t>(b)].tau());
                    rep.omega_max = std::max(rep.omega_max, std::abs(w));
                }
            }
        }
        for (int k = 1; 2 * k - 1 <= nb; ++k) {
            const auto& odd = blocks[static_cast<std::size_t>(2 * k - 2)];
            const auto& target = blocks[static_cast<std::size_t>(2 * m - 2 * k + 1)];
            const std::array<PCVector, 2> image{odd[0].tau(), odd[1].tau()};
            rep.angle_max = std::max(rep.angle_max, subspace_gap(image, target));
        }
        const Eigen::MatrixXd c = block_couplings(conn, frame, p, options.delta);
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < nb; ++j) {
                if (std::abs(i - j) >= 2) rep.offblock_max = std::max(rep.offblock_max, c(i, j));
                if (std::abs(i - j) == 1) rep.adjacent_min = std::min(rep.adjacent_min, c(i, j));
            }
        }
        rep.conformality_max = std::max(rep.conformality_max, conformality_defect(conn.at(p.real(), p.imag()), angles));
        ++rep.samples;
    }
    rep.gram_ok = rep.gram_min >= options.tol_gram;
    rep.angle_ok = rep.angle_max < options.tol_angle;
    rep.omega_ok = rep.omega_max < options.tol_omega;
    rep.tridiagonal_ok = rep.offblock_max < options.tol_tridiagonal;
    rep.conformal_ok = rep.conformality_max < options.tol_conformal;
    return rep;
}

double block_decoupling(const ConnectionField& conn, std::complex<double> centre, const std::vector<int>& group,
                        const FrenetOptions& options) {
    const int m = conn.m();
    const int nb = 2 * m;
    std::vector<bool> inside(static_cast<std::size_t>(nb), false);
    for (int j : group) {
        if (j < 1 || j > nb) throw std::out_of_range("block_decoupling: block index");
        inside[static_cast<std::size_t>(j - 1)] = true;
    }
    const TransportOptions opts{options.delta};
    double worst = 0.0;
    for (const auto& p : patch(centre, options)) {
        const PCMatrix frame = transport_segment(conn, initial_frame(m), centre, p, opts);
        const Eigen::MatrixXd c = block_couplings(conn, frame, p, options.delta);
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < nb; ++j) {
                if (inside[static_cast<std::size_t>(i)] != inside[static_cast<std::size_t>(j)]) {
                    worst = std::max(worst, c(i, j));
                }
            }
        }
    }
    return worst;
}

}  // namespace phl

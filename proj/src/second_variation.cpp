#include "phl/second_variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phl/hspace.hpp"
#include "phl/solver.hpp"

namespace phl {

std::array<Eigen::Index, 2> block_indices(int m, int j) {
    if (j < 1 || j > 2 * m) throw std::out_of_range("block_indices: block index");
    const int k = j <= m ? j : 2 * m + 1 - j;
    // tau^{j-1}: even powers live in the a-part, odd powers in the b-part.
    const Eigen::Index offset = (j - 1) % 2 == 0 ? 0 : 2 * m + 1;
    const Eigen::Index start = offset + LocalConnection::block_start(k);
    return {start, start + 1};
}

std::vector<int> normal_blocks(int m, NormalSide side) {
    std::vector<int> out;
    if (side == NormalSide::plus) {
        for (int j = 3; j <= 2 * m - 1; j += 2) out.push_back(j);
    } else {
        for (int j = 2; j <= 2 * m; j += 2) out.push_back(j);
    }
    return out;
}

double BumpSection::value(double x, double y) const {
    const double r2 = (std::norm(std::complex<double>(x, y) - centre)) / (radius * radius);
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

std::array<double, 2> BumpSection::gradient(double x, double y) const {
    const double dx = x - centre.real();
    const double dy = y - centre.imag();
    const double rho2 = radius * radius;
    const double r2 = (dx * dx + dy * dy) / rho2;
    if (r2 >= 1.0) return {0.0, 0.0};
    const double f = std::exp(-1.0 / (1.0 - r2));
    const double scale = -2.0 * f / (rho2 * (1.0 - r2) * (1.0 - r2));
    return {scale * dx, scale * dy};
}

BumpSection random_bump(int m, NormalSide side, std::complex<double> centre, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    BumpSection b{centre, radius, Eigen::VectorXd::Zero(2 * (2 * m + 1))};
    const auto blocks = normal_blocks(m, side);
    if (blocks.empty()) throw std::invalid_argument("random_bump: the requested normal summand is trivial");
    for (int j : blocks) {
        for (Eigen::Index idx : block_indices(m, j)) b.coeffs(idx) = normal(rng);
    }
    b.coeffs /= b.coeffs.norm();
    return b;
}

namespace {

// [[K, S], [S, K]] acting on (a; b).
Eigen::MatrixXd real_generator(const LocalConnection& conn, Direction d) {
    const Eigen::Index dim = conn.dim();
    Eigen::MatrixXd out(2 * dim, 2 * dim);
    out << conn.k(d), conn.s(d), conn.s(d), conn.k(d);
    return out;
}

Eigen::VectorXd g_diag(Eigen::Index dim) {
    Eigen::VectorXd g(2 * dim);
    g.head(dim).setOnes();
    g.tail(dim).setConstant(-1.0);
    return g;
}

// Orthogonal (coordinate) projection onto a list of blocks.
Eigen::VectorXd mask(int m, const std::vector<int>& blocks) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * (2 * m + 1));
    for (int j : blocks) {
        for (Eigen::Index idx : block_indices(m, j)) out(idx) = 1.0;
    }
    return out;
}

double g_norm2(const Eigen::VectorXd& v, const Eigen::VectorXd& g) { return (v.array().square() * g.array()).sum(); }

TangentVector to_tangent(const HPoint& base, const Eigen::VectorXd& ab) {
    const Eigen::Index dim = ab.size() / 2;
    const Eigen::VectorXd a = ab.head(dim);
    const Eigen::VectorXd b = ab.tail(dim);
    // Local frame at the canonical point: x = (w+, Q w-).
    return {base, PCVector(a + b, (a - b).reverse())};
}

}  // namespace

VariationTerms variation_integrand(const LocalConnection& conn, double h1, const Eigen::VectorXd& coeffs,
                                   NormalSide side, double f, double fx, double fy) {
    const int m = conn.m;
    const Eigen::Index dim = conn.dim();
    if (coeffs.size() != 2 * dim) throw std::invalid_argument("variation_integrand: coefficient size");
    const NormalSide other = side == NormalSide::plus ? NormalSide::minus : NormalSide::plus;
    const Eigen::VectorXd own = mask(m, normal_blocks(m, side));
    const double stray = (coeffs.array() * (1.0 - own.array())).abs().maxCoeff();
    if (stray > 1e-8 * std::max(1.0, coeffs.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("variation_integrand: section is not in the requested normal summand");
    }
    const Eigen::VectorXd g = g_diag(dim);
    const Eigen::VectorXd opposite = mask(m, normal_blocks(m, other));
    const Eigen::VectorXd tangent = mask(m, {1});
    Eigen::VectorXd sigma_mask = Eigen::VectorXd::Ones(2 * dim);
    sigma_mask(0) = 0.0;
    sigma_mask(dim) = 0.0;

    const double unit = 1.0 / std::sqrt(2.0 * h1);
    VariationTerms t;
    const HPoint base = HPoint::canonical(dim - 1);
    const TangentVector xi = to_tangent(base, f * coeffs);
    const double df[2] = {fx, fy};
    const Direction dirs[2] = {Direction::x, Direction::y};
    for (int i = 0; i < 2; ++i) {
        const Eigen::MatrixXd gen = real_generator(conn, dirs[i]);
        // Covariant derivative along the unit tangent e_i, projected off sigma and tau sigma.
        const Eigen::VectorXd nabla = (unit * (df[i] * coeffs + f * gen * coeffs)).cwiseProduct(sigma_mask);
        t.a += g_norm2(nabla.cwiseProduct(own), g);
        t.b += g_norm2(nabla.cwiseProduct(opposite), g);
        t.c += g_norm2(nabla.cwiseProduct(tangent), g);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * dim);
        e(LocalConnection::block_start(1) + i) = 1.0;
        const TangentVector ei = to_tangent(base, e);
        t.d += riemann_tensor(ei, xi, ei, xi, -4.0);
    }
    return t;
}

VariationReport second_variation(const ConnectionField& conn, const BumpSection& xi, NormalSide side,
                                 int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("second_variation: need at least 2 grid points");
    VariationReport rep;
    rep.total_min = 1e300;
    rep.total_max = -1e300;
    const double expected = side == NormalSide::plus ? 1.0 : -1.0;
    bool ok = true;
    for (int a = 0; a < grid_points; ++a) {
        for (int b = 0; b < grid_points; ++b) {
            const double x = xi.centre.real() + xi.radius * (-1.0 + 2.0 * a / (grid_points - 1));
            const double y = xi.centre.imag() + xi.radius * (-1.0 + 2.0 * b / (grid_points - 1));
            const double f = xi.value(x, y);
            if (!(f > 1e-12)) continue;
            const auto grad = xi.gradient(x, y);
            const FieldSample s = conn.field().sample(x, y);
            const VariationTerms terms =
                variation_integrand(assemble_local(s, conn.corruption()), s.h[0], xi.coeffs, side, f, grad[0], grad[1]);
            rep.samples.push_back(terms);
            const double total = terms.total();
            rep.total_min = std::min(rep.total_min, total);
            rep.total_max = std::max(rep.total_max, total);
            ok = ok && expected * total > 0.0;
            ++rep.support_points;
        }
    }
    rep.sign_ok = ok && rep.support_points > 0;
    return rep;
}

std::vector<double> term_b_eigenvalues(const LocalConnection& conn, double h1, NormalSide side) {
    const int m = conn.m;
    const Eigen::Index dim = conn.dim();
    const NormalSide other = side == NormalSide::plus ? NormalSide::minus : NormalSide::plus;
    const Eigen::VectorXd g = g_diag(dim);
    const Eigen::VectorXd opposite = mask(m, normal_blocks(m, other));
    std::vector<Eigen::Index> basis;
    for (int j : normal_blocks(m, side)) {
        for (Eigen::Index idx : block_indices(m, j)) basis.push_back(idx);
    }
    const auto nbasis = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd form = Eigen::MatrixXd::Zero(nbasis, nbasis);
    for (const Direction d : {Direction::x, Direction::y}) {
        const Eigen::MatrixXd gen = real_generator(conn, d) / std::sqrt(2.0 * h1);
        Eigen::MatrixXd images(2 * dim, nbasis);
        for (Eigen::Index c = 0; c < nbasis; ++c) images.col(c) = gen.col(basis[static_cast<std::size_t>(c)]).cwiseProduct(opposite);
        form += images.transpose() * g.asDiagonal() * images;
    }
    // Frame coordinates carry the sign of g on the summand.
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(form).eigenvalues();
    std::vector<double> out(eig.data(), eig.data() + eig.size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> term_b_closed_form(const FieldSample& sample, NormalSide side) {
    const int m = sample.m();
    if (m < 2) throw std::invalid_argument("term_b_closed_form: needs m >= 2");
    const std::vector<double> chain = eta_norms(sample.h, sample.gamma);  // ||eta_2||^2 .. ||eta_{m+1}||^2
    auto eta = [&](int j) {
        const int k = j <= m + 1 ? j : 2 * m + 2 - j;
        return chain[static_cast<std::size_t>(k - 2)];
    };
    std::vector<double> vals;
    if (side == NormalSide::plus) {
        for (int i = 2; i <= m; ++i) vals.push_back(-(eta(2 * i - 1) + eta(2 * i)));
    } else {
        vals.push_back(eta(3));
        for (int i = 2; i <= m - 1; ++i) vals.push_back(eta(2 * i) + eta(2 * i + 1));
        vals.push_back(eta(2 * m));
    }
    std::vector<double> out;
    for (double v : vals) {
        out.push_back(v);
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace phl

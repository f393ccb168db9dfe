#include "phl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "phl/parallel.hpp"

namespace phl::detail {
class JacobianOperator;
}  // namespace phl::detail

namespace Eigen::internal {
template <>
struct traits<phl::detail::JacobianOperator> : public traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace phl::detail {

// Matrix-free Newton Jacobian: (1/4) spectral Laplacian on each block plus the pointwise
// reaction coupling, stored as a tridiagonal m x m block per grid point.
class JacobianOperator : public Eigen::EigenBase<JacobianOperator> {
public:
    using Scalar = double;
    using RealScalar = double;
    using StorageIndex = int;
    enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

    JacobianOperator(const SpectralOps& ops, int m, const std::vector<Eigen::ArrayXd>& diag,
                     const std::vector<Eigen::ArrayXd>& lower, const std::vector<Eigen::ArrayXd>& upper)
        : ops_(&ops), m_(m), diag_(&diag), lower_(&lower), upper_(&upper) {}

    Eigen::Index rows() const { return m_ * ops_->grid().points(); }
    Eigen::Index cols() const { return rows(); }

    template <typename Rhs>
    Eigen::Product<JacobianOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
        return Eigen::Product<JacobianOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        const int n = ops_->grid().n();
        const Eigen::Index pts = ops_->grid().points();
        Eigen::VectorXd out(rows());
        for (int k = 0; k < m_; ++k) {
            const RealGrid block = Eigen::Map<const RealGrid>(v.data() + k * pts, n, n);
            const RealGrid lap = ops_->laplacian(block);
            Eigen::Map<Eigen::ArrayXd> dst(out.data() + k * pts, pts);
            dst = 0.25 * Eigen::Map<const Eigen::ArrayXd>(lap.data(), pts);
            dst += (*diag_)[static_cast<std::size_t>(k)] * v.segment(k * pts, pts).array();
            if (k > 0) dst += (*lower_)[static_cast<std::size_t>(k)] * v.segment((k - 1) * pts, pts).array();
            if (k + 1 < m_) dst += (*upper_)[static_cast<std::size_t>(k)] * v.segment((k + 1) * pts, pts).array();
        }
        return out;
    }

private:
    const SpectralOps* ops_;
    int m_;
    const std::vector<Eigen::ArrayXd>* diag_;
    const std::vector<Eigen::ArrayXd>* lower_;
    const std::vector<Eigen::ArrayXd>* upper_;
};

// Applies a prefactored sparse LU of the stencil Jacobian.
class LuPreconditioner {
public:
    using Lu = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

    LuPreconditioner() = default;
    template <typename M>
    explicit LuPreconditioner(const M&) {}

    void set(const Lu* lu) { lu_ = lu; }
    template <typename M>
    LuPreconditioner& analyzePattern(const M&) { return *this; }
    template <typename M>
    LuPreconditioner& factorize(const M&) { return *this; }
    template <typename M>
    LuPreconditioner& compute(const M&) { return *this; }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return lu_->solve(b); }
    Eigen::ComputationInfo info() const { return lu_ ? Eigen::Success : Eigen::InvalidInput; }

private:
    const Lu* lu_ = nullptr;
};

}  // namespace phl::detail

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<phl::detail::JacobianOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<phl::detail::JacobianOperator, Rhs,
                                generic_product_impl<phl::detail::JacobianOperator, Rhs>> {
    using Scalar = typename Product<phl::detail::JacobianOperator, Rhs>::Scalar;

    template <typename Dest>
    static void scaleAndAddTo(Dest& dst, const phl::detail::JacobianOperator& lhs, const Rhs& rhs,
                              const Scalar& alpha) {
        dst.noalias() += alpha * lhs.apply(rhs);
    }
};

}  // namespace Eigen::internal

namespace phl {

MetricSolution MetricSolution::constant(int n, const std::vector<double>& h_values) {
    MetricSolution s;
    for (double h : h_values) {
        if (!(h > 0.0)) throw std::invalid_argument("MetricSolution: metric weights must be positive");
        s.u.push_back(RealGrid::Constant(n, n, std::log(h)));
    }
    return s;
}

namespace {

void require_compatible(const MetricSolution& sol, const HiggsData& data, const TorusGrid& grid) {
    data.validate();
    if (sol.m() != data.m) throw std::invalid_argument("solution and Higgs data disagree on m");
    if (data.resolution() != grid.n()) throw std::invalid_argument("Higgs data resolution differs from the grid");
    for (const auto& u : sol.u) {
        if (u.rows() != grid.n() || u.cols() != grid.n()) {
            throw std::invalid_argument("solution grid shape mismatch");
        }
    }
}

// |gamma_j|^2 for j = 1..m, flattened.
std::vector<Eigen::ArrayXd> gamma_weights(const HiggsData& data) {
    std::vector<Eigen::ArrayXd> c;
    for (int j = 1; j <= data.m; ++j) {
        const RealGrid a = data.gamma(j).cwiseAbs2();
        c.emplace_back(Eigen::Map<const Eigen::ArrayXd>(a.data(), a.size()));
    }
    return c;
}

std::vector<Eigen::ArrayXd> flatten(const MetricSolution& sol) {
    std::vector<Eigen::ArrayXd> u;
    for (const auto& g : sol.u) u.emplace_back(Eigen::Map<const Eigen::ArrayXd>(g.data(), g.size()));
    return u;
}

// Reaction fluxes a_j = c_{j-1} e^{u_j - u_{j-1}} (j = 1..m) and the corner term |gamma_m|^2 e^{-2 u_m}.
struct Fluxes {
    std::vector<Eigen::ArrayXd> a;  // index j-1
    Eigen::ArrayXd corner;
};

Fluxes fluxes(const std::vector<Eigen::ArrayXd>& u, const std::vector<Eigen::ArrayXd>& c) {
    const std::size_t m = u.size();
    Fluxes f;
    for (std::size_t j = 0; j < m; ++j) {
        if (j == 0) {
            f.a.push_back(u[0].exp());
        } else {
            f.a.push_back(c[j - 1] * (u[j] - u[j - 1]).exp());
        }
    }
    f.corner = c[m - 1] * (-2.0 * u[m - 1]).exp();
    return f;
}

std::vector<Eigen::ArrayXd> residual_flat(const std::vector<Eigen::ArrayXd>& u, const std::vector<Eigen::ArrayXd>& c,
                                          const SpectralOps& ops, DiffBackend backend) {
    const int n = ops.grid().n();
    const std::size_t m = u.size();
    const Fluxes f = fluxes(u, c);
    std::vector<Eigen::ArrayXd> r(m);
    parallel_for(0, m, [&](std::size_t j) {
        const RealGrid grid_u = Eigen::Map<const RealGrid>(u[j].data(), n, n);
        const RealGrid lap = laplacian(grid_u, ops, backend);
        Eigen::ArrayXd rj = 0.25 * Eigen::Map<const Eigen::ArrayXd>(lap.data(), lap.size());
        rj -= f.a[j];
        rj += (j + 1 < m) ? f.a[j + 1] : f.corner;
        r[j] = std::move(rj);
    });
    return r;
}

double max_abs_flat(const std::vector<Eigen::ArrayXd>& r) {
    double out = 0.0;
    for (const auto& x : r) out = std::max(out, x.abs().maxCoeff());
    return out;
}

double l2_flat(const std::vector<Eigen::ArrayXd>& r) {
    std::vector<double> squares;
    for (const auto& x : r) {
        for (Eigen::Index i = 0; i < x.size(); ++i) squares.push_back(x(i) * x(i));
    }
    return std::sqrt(deterministic_sum(squares));
}

}  // namespace

std::vector<RealGrid> hitchin_residual(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops,
                                       DiffBackend backend) {
    require_compatible(sol, data, ops.grid());
    const int n = ops.grid().n();
    const auto r = residual_flat(flatten(sol), gamma_weights(data), ops, backend);
    std::vector<RealGrid> out;
    for (const auto& x : r) out.emplace_back(Eigen::Map<const RealGrid>(x.data(), n, n));
    return out;
}

double max_abs(const std::vector<RealGrid>& grids) {
    double out = 0.0;
    for (const auto& g : grids) out = std::max(out, g.cwiseAbs().maxCoeff());
    return out;
}

std::vector<double> solve_constant(int m, const std::vector<double>& gamma_mags) {
    if (m < 1 || static_cast<int>(gamma_mags.size()) != m) {
        throw std::invalid_argument("solve_constant: expected m gamma magnitudes");
    }
    for (double g : gamma_mags) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("solve_constant: no positive root (a gamma magnitude vanishes)");
        }
    }
    // Equal fluxes X: (1 + 2m) log X = log|gamma_m|^2 + 2 sum_{j<m} log|gamma_j|^2.
    std::vector<double> log_c(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) log_c[static_cast<std::size_t>(j)] = 2.0 * std::log(gamma_mags[static_cast<std::size_t>(j)]);
    double rhs = log_c.back();
    for (int j = 0; j + 1 < m; ++j) rhs += 2.0 * log_c[static_cast<std::size_t>(j)];
    const double log_x = rhs / (1.0 + 2.0 * m);
    std::vector<double> h(static_cast<std::size_t>(m));
    double u = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double log_prev_c = j == 1 ? 0.0 : log_c[static_cast<std::size_t>(j - 2)];
        u += log_x - log_prev_c;
        h[static_cast<std::size_t>(j - 1)] = std::exp(u);
    }
    return h;
}

SolveResult solve_pde(const HiggsData& data, const SpectralOps& ops, const SolveOptions& options) {
    data.validate();
    const TorusGrid& grid = ops.grid();
    if (data.resolution() != grid.n()) throw std::invalid_argument("solve_pde: data resolution differs from grid");
    const int m = data.m;
    const int n = grid.n();
    const Eigen::Index pts = grid.points();
    const auto c = gamma_weights(data);

    std::vector<double> mean_mags;
    for (int j = 1; j <= m; ++j) mean_mags.push_back(data.gamma(j).cwiseAbs().mean());
    MetricSolution guess = MetricSolution::constant(n, solve_constant(m, mean_mags));
    std::vector<Eigen::ArrayXd> u = flatten(guess);

    const Eigen::SparseMatrix<double> stencil = stencil_laplacian_matrix(grid);
    SolveResult result;
    SolveLog& log = result.log;
    auto r = residual_flat(u, c, ops, options.backend);
    double res_max = max_abs_flat(r);
    log.residual_history.push_back(res_max);
    std::vector<Eigen::ArrayXd> best_u = u;
    double best_res = res_max;

    for (int iter = 0; iter < options.max_iter && res_max >= options.tol; ++iter) {
        // Reaction Jacobian: d r_j / d u_j, d u_{j-1}, d u_{j+1}.
        const Fluxes f = fluxes(u, c);
        std::vector<Eigen::ArrayXd> diag(static_cast<std::size_t>(m)), lower(static_cast<std::size_t>(m)),
            upper(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const auto js = static_cast<std::size_t>(j);
            // the corner term |gamma_m|^2 e^{-2 u_m} differentiates to -2 times itself
            const Eigen::ArrayXd outflow = (j + 1 < m) ? f.a[js + 1] : Eigen::ArrayXd(2.0 * f.corner);
            diag[js] = -f.a[js] - outflow;
            lower[js] = j > 0 ? f.a[js] : Eigen::ArrayXd::Zero(pts);
            upper[js] = j + 1 < m ? f.a[js + 1] : Eigen::ArrayXd::Zero(pts);
        }

        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(stencil.nonZeros() * m + 3 * m * pts));
        for (int k = 0; k < m; ++k) {
            for (int col = 0; col < stencil.outerSize(); ++col) {
                for (Eigen::SparseMatrix<double>::InnerIterator it(stencil, col); it; ++it) {
                    trips.emplace_back(k * pts + it.row(), k * pts + it.col(), 0.25 * it.value());
                }
            }
            const auto ks = static_cast<std::size_t>(k);
            for (Eigen::Index p = 0; p < pts; ++p) {
                trips.emplace_back(k * pts + p, k * pts + p, diag[ks](p));
                if (k > 0) trips.emplace_back(k * pts + p, (k - 1) * pts + p, lower[ks](p));
                if (k + 1 < m) trips.emplace_back(k * pts + p, (k + 1) * pts + p, upper[ks](p));
            }
        }
        Eigen::SparseMatrix<double> jac(m * pts, m * pts);
        jac.setFromTriplets(trips.begin(), trips.end());
        detail::LuPreconditioner::Lu lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) {
            log.diagnostic = "sparse LU of the Newton Jacobian failed";
            break;
        }

        Eigen::VectorXd rhs(m * pts);
        for (int k = 0; k < m; ++k) rhs.segment(k * pts, pts) = -r[static_cast<std::size_t>(k)].matrix();
        Eigen::VectorXd delta;
        if (options.backend == DiffBackend::stencil) {
            delta = lu.solve(rhs);
        } else {
            const detail::JacobianOperator op(ops, m, diag, lower, upper);
            Eigen::GMRES<detail::JacobianOperator, detail::LuPreconditioner> gmres;
            gmres.preconditioner().set(&lu);
            gmres.set_restart(60);
            gmres.setMaxIterations(200);
            gmres.setTolerance(1e-13);
            gmres.compute(op);
            delta = gmres.solve(rhs);
        }

        // Backtracking on the residual 2-norm.
        const double base_norm = l2_flat(r);
        double step = 1.0;
        int halvings = 0;
        std::vector<Eigen::ArrayXd> trial;
        std::vector<Eigen::ArrayXd> trial_r;
        for (;;) {
            trial = u;
            for (int k = 0; k < m; ++k) {
                trial[static_cast<std::size_t>(k)] += step * delta.segment(k * pts, pts).array();
            }
            trial_r = residual_flat(trial, c, ops, options.backend);
            const double norm = l2_flat(trial_r);
            if (std::isfinite(norm) && (norm < base_norm || halvings >= 30)) break;
            step *= 0.5;
            ++halvings;
        }
        u = std::move(trial);
        r = std::move(trial_r);
        res_max = max_abs_flat(r);
        log.iterations = iter + 1;
        log.damping_halvings.push_back(halvings);
        log.residual_history.push_back(res_max);
        double umax = 0.0;
        for (const auto& x : u) umax = std::max(umax, x.abs().maxCoeff());
        if (!(umax <= options.blowup)) {
            throw std::runtime_error("solve_pde: blow-up detected (|u| exceeds " + std::to_string(options.blowup) + ")");
        }
        if (res_max < best_res) {
            best_res = res_max;
            best_u = u;
        }
    }

    log.converged = best_res < options.tol;
    if (!log.converged && log.diagnostic.empty()) {
        log.diagnostic = "no convergence after " + std::to_string(log.iterations) +
                         " Newton steps; best residual " + std::to_string(best_res);
    }
    for (const auto& x : best_u) result.solution.u.emplace_back(Eigen::Map<const RealGrid>(x.data(), n, n));
    return result;
}

std::vector<double> eta_norms(const std::vector<double>& h, const std::vector<std::complex<double>>& gamma) {
    const std::size_t m = h.size();
    if (gamma.size() != m || m == 0) throw std::invalid_argument("eta_norms: size mismatch");
    std::vector<double> out(m);
    for (std::size_t j = 1; j < m; ++j) {
        // ||eta_{j+1}||^2 = h_{j+1} h_1^-1 h_j^-1 |gamma_j|^2
        out[j - 1] = h[j] / (h[0] * h[j - 1]) * std::norm(gamma[j - 1]);
    }
    out[m - 1] = std::norm(gamma[m - 1]) / (h[0] * h[m - 1] * h[m - 1]);
    return out;
}

MonotonicityReport monotonicity_report(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops,
                                       double slack) {
    require_compatible(sol, data, ops.grid());
    const int m = data.m;
    const int n = ops.grid().n();
    MonotonicityReport rep;
    rep.all_subharmonic = true;
    for (const auto& u : sol.u) {
        const double mn = (0.25 * ops.laplacian(u)).minCoeff();
        rep.laplacian_min.push_back(mn);
        rep.all_subharmonic = rep.all_subharmonic && mn >= -slack;
    }
    rep.chain.assign(static_cast<std::size_t>(m), RealGrid(n, n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            std::vector<double> h;
            std::vector<std::complex<double>> g;
            for (int k = 1; k <= m; ++k) {
                h.push_back(std::exp(sol.u[static_cast<std::size_t>(k - 1)](i, j)));
                g.push_back(data.gamma(k)(i, j));
            }
            const auto e = eta_norms(h, g);
            for (int k = 0; k < m; ++k) rep.chain[static_cast<std::size_t>(k)](i, j) = e[static_cast<std::size_t>(k)];
        }
    }
    rep.chain_bounded = true;
    rep.chain_ordered = true;
    rep.chain_strict = true;
    for (int k = 0; k < m; ++k) {
        const RealGrid& cur = rep.chain[static_cast<std::size_t>(k)];
        rep.chain_max.push_back(cur.maxCoeff());
        const RealGrid upper = k == 0 ? RealGrid::Ones(n, n) : rep.chain[static_cast<std::size_t>(k - 1)];
        const RealGrid gap = upper - cur;
        rep.chain_ordered = rep.chain_ordered && gap.minCoeff() >= -slack;
        rep.chain_strict = rep.chain_strict && gap.minCoeff() > slack;
        if (k == 0) rep.chain_bounded = gap.minCoeff() >= -slack;
    }
    return rep;
}

}  // namespace phl

#include "phl/torus.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace phl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution with fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

bool is_nyquist(int index, int n) { return 2 * index == n; }

struct FftwBuffer {
    explicit FftwBuffer(std::size_t count)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

}  // namespace

TorusGrid::TorusGrid(int n, std::complex<double> modulus) : n_(n), modulus_(modulus) {
    if (n < 8 || n % 2 != 0) {
        throw std::invalid_argument("TorusGrid: resolution must be even and at least 8");
    }
    if (!(modulus.imag() > 0.0)) {
        throw std::invalid_argument("TorusGrid: modulus must have positive imaginary part");
    }
}

std::complex<double> TorusGrid::point(int i, int j) const {
    const double s = static_cast<double>(i) / n_;
    const double t = static_cast<double>(j) / n_;
    return s + modulus_ * t;
}

std::pair<double, double> TorusGrid::lattice_coords(double x, double y) const {
    const double t = y / modulus_.imag();
    return {x - modulus_.real() * t, t};
}

RealGrid TorusGrid::sample(const std::function<double(double, double)>& f) const {
    RealGrid out(n_, n_);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            const auto z = point(i, j);
            out(i, j) = f(z.real(), z.imag());
        }
    }
    return out;
}

ComplexGrid TorusGrid::sample_complex(const std::function<std::complex<double>(double, double)>& f) const {
    ComplexGrid out(n_, n_);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            const auto z = point(i, j);
            out(i, j) = f(z.real(), z.imag());
        }
    }
    return out;
}

struct SpectralOps::Impl {
    TorusGrid grid;
    fftw_plan forward_plan = nullptr;
    fftw_plan backward_plan = nullptr;
    ComplexGrid dx_symbol;
    ComplexGrid dy_symbol;
    RealGrid lap_symbol;

    explicit Impl(const TorusGrid& g) : grid(g) {
        const int n = g.n();
        FftwBuffer in(static_cast<std::size_t>(n) * n);
        FftwBuffer out(static_cast<std::size_t>(n) * n);
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            forward_plan = fftw_plan_dft_2d(n, n, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
            backward_plan = fftw_plan_dft_2d(n, n, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        if (forward_plan == nullptr || backward_plan == nullptr) {
            throw std::runtime_error("SpectralOps: FFTW planning failed");
        }
        const double a = g.modulus().real();
        const double b = g.modulus().imag();
        dx_symbol.resize(n, n);
        dy_symbol.resize(n, n);
        lap_symbol.resize(n, n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int k = wavenumber(i, n);
                const int l = wavenumber(j, n);
                const bool nk = is_nyquist(i, n);
                const bool nl = is_nyquist(j, n);
                // Odd derivatives drop the Nyquist modes so real data stays real.
                dx_symbol(i, j) = nk ? 0.0 : std::complex<double>(0.0, kTwoPi * k);
                dy_symbol(i, j) = (nl || (nk && a != 0.0))
                                      ? 0.0
                                      : std::complex<double>(0.0, kTwoPi * (l - a * k) / b);
                // Average the symbol over the +/- aliases of Nyquist indices.
                double acc = 0.0;
                int count = 0;
                for (int sk : {1, -1}) {
                    if (!nk && sk < 0) continue;
                    for (int sl : {1, -1}) {
                        if (!nl && sl < 0) continue;
                        const double kk = sk * k;
                        const double ll = sl * l;
                        acc += kk * kk + (ll - a * kk) * (ll - a * kk) / (b * b);
                        ++count;
                    }
                }
                lap_symbol(i, j) = -kTwoPi * kTwoPi * acc / count;
            }
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (forward_plan != nullptr) fftw_destroy_plan(forward_plan);
        if (backward_plan != nullptr) fftw_destroy_plan(backward_plan);
    }

    ComplexGrid run(fftw_plan plan, const ComplexGrid& values) const {
        const int n = grid.n();
        if (values.rows() != n || values.cols() != n) {
            throw std::invalid_argument("SpectralOps: grid shape mismatch");
        }
        const std::size_t count = static_cast<std::size_t>(n) * n;
        FftwBuffer in(count);
        FftwBuffer out(count);
        for (std::size_t k = 0; k < count; ++k) {
            in.data[k][0] = values.data()[k].real();
            in.data[k][1] = values.data()[k].imag();
        }
        fftw_execute_dft(plan, in.data, out.data);
        ComplexGrid result(n, n);
        for (std::size_t k = 0; k < count; ++k) {
            result.data()[k] = {out.data[k][0], out.data[k][1]};
        }
        return result;
    }
};

SpectralOps::SpectralOps(const TorusGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralOps::~SpectralOps() = default;
SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

const TorusGrid& SpectralOps::grid() const { return impl_->grid; }

ComplexGrid SpectralOps::forward(const ComplexGrid& values) const {
    return impl_->run(impl_->forward_plan, values);
}

ComplexGrid SpectralOps::backward(const ComplexGrid& coeffs) const {
    const double scale = 1.0 / static_cast<double>(impl_->grid.points());
    return impl_->run(impl_->backward_plan, coeffs) * scale;
}

ComplexGrid SpectralOps::dx(const ComplexGrid& f) const {
    return backward(forward(f).cwiseProduct(impl_->dx_symbol));
}

ComplexGrid SpectralOps::dy(const ComplexGrid& f) const {
    return backward(forward(f).cwiseProduct(impl_->dy_symbol));
}

RealGrid SpectralOps::dx(const RealGrid& f) const { return dx(ComplexGrid(f.cast<std::complex<double>>())).real(); }

RealGrid SpectralOps::dy(const RealGrid& f) const { return dy(ComplexGrid(f.cast<std::complex<double>>())).real(); }

RealGrid SpectralOps::laplacian(const RealGrid& f) const {
    const ComplexGrid c = forward(f.cast<std::complex<double>>());
    return backward(c.cwiseProduct(impl_->lap_symbol.cast<std::complex<double>>())).real();
}

double SpectralOps::laplacian_symbol(int i, int j) const { return impl_->lap_symbol(i, j); }

FourierInterpolant::FourierInterpolant(const SpectralOps& ops, const ComplexGrid& values)
    : grid_(ops.grid()), coeffs_(ops.forward(values) / static_cast<double>(ops.grid().points())) {}

FourierInterpolant::Sample FourierInterpolant::operator()(double x, double y) const {
    const int n = grid_.n();
    const auto [s, t] = grid_.lattice_coords(x, y);
    // Separable basis: e^{2 pi i k s}, with cos for the Nyquist mode.
    Eigen::VectorXcd bs(n), dbs(n), bt(n), dbt(n);
    for (int i = 0; i < n; ++i) {
        const int k = wavenumber(i, n);
        if (is_nyquist(i, n)) {
            bs(i) = std::cos(kTwoPi * k * s);
            dbs(i) = -kTwoPi * k * std::sin(kTwoPi * k * s);
            bt(i) = std::cos(kTwoPi * k * t);
            dbt(i) = -kTwoPi * k * std::sin(kTwoPi * k * t);
        } else {
            bs(i) = std::polar(1.0, kTwoPi * k * s);
            dbs(i) = std::complex<double>(0.0, kTwoPi * k) * bs(i);
            bt(i) = std::polar(1.0, kTwoPi * k * t);
            dbt(i) = std::complex<double>(0.0, kTwoPi * k) * bt(i);
        }
    }
    const Eigen::VectorXcd ct = coeffs_ * bt;
    const Eigen::VectorXcd cdt = coeffs_ * dbt;
    const std::complex<double> value = bs.transpose() * ct;
    const std::complex<double> ds = dbs.transpose() * ct;
    const std::complex<double> dt = bs.transpose() * cdt;
    const double a = grid_.modulus().real();
    const double b = grid_.modulus().imag();
    return {value, ds, (dt - a * ds) / b};
}

namespace {

double wrap_at(const RealGrid& f, int i, int j) {
    const int n = static_cast<int>(f.rows());
    return f((i % n + n) % n, (j % n + n) % n);
}

void require_shape(const RealGrid& f, const TorusGrid& grid) {
    if (f.rows() != grid.n() || f.cols() != grid.n()) {
        throw std::invalid_argument("grid function shape does not match the torus grid");
    }
}

}  // namespace

RealGrid stencil_dx(const RealGrid& f, const TorusGrid& grid) {
    require_shape(f, grid);
    const int n = grid.n();
    const double h = grid.spacing();
    RealGrid out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out(i, j) = (wrap_at(f, i + 1, j) - wrap_at(f, i - 1, j)) / (2.0 * h);
        }
    }
    return out;
}

RealGrid stencil_dy(const RealGrid& f, const TorusGrid& grid) {
    require_shape(f, grid);
    const int n = grid.n();
    const double h = grid.spacing();
    const double a = grid.modulus().real();
    const double b = grid.modulus().imag();
    RealGrid out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double ds = (wrap_at(f, i + 1, j) - wrap_at(f, i - 1, j)) / (2.0 * h);
            const double dt = (wrap_at(f, i, j + 1) - wrap_at(f, i, j - 1)) / (2.0 * h);
            out(i, j) = (dt - a * ds) / b;
        }
    }
    return out;
}

namespace {

struct StencilWeights {
    double ss, st, tt;
};

// Laplacian in lattice coordinates: (1 + a^2/b^2) d_ss - 2a/b^2 d_st + 1/b^2 d_tt.
StencilWeights laplacian_weights(const TorusGrid& grid) {
    const double a = grid.modulus().real();
    const double b = grid.modulus().imag();
    return {1.0 + a * a / (b * b), -2.0 * a / (b * b), 1.0 / (b * b)};
}

}  // namespace

RealGrid stencil_laplacian(const RealGrid& f, const TorusGrid& grid) {
    require_shape(f, grid);
    const int n = grid.n();
    const double h2 = grid.spacing() * grid.spacing();
    const StencilWeights w = laplacian_weights(grid);
    RealGrid out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double c = f(i, j);
            const double dss = wrap_at(f, i + 1, j) - 2.0 * c + wrap_at(f, i - 1, j);
            const double dtt = wrap_at(f, i, j + 1) - 2.0 * c + wrap_at(f, i, j - 1);
            double dst = 0.0;
            if (w.st != 0.0) {
                dst = 0.25 * (wrap_at(f, i + 1, j + 1) - wrap_at(f, i + 1, j - 1) -
                              wrap_at(f, i - 1, j + 1) + wrap_at(f, i - 1, j - 1));
            }
            out(i, j) = (w.ss * dss + w.st * dst + w.tt * dtt) / h2;
        }
    }
    return out;
}

Eigen::SparseMatrix<double> stencil_laplacian_matrix(const TorusGrid& grid) {
    const int n = grid.n();
    const double h2 = grid.spacing() * grid.spacing();
    const StencilWeights w = laplacian_weights(grid);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(grid.points()) * 9);
    auto idx = [n](int i, int j) { return flat_index((i % n + n) % n, (j % n + n) % n, n); };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Eigen::Index row = idx(i, j);
            entries.emplace_back(row, row, -2.0 * (w.ss + w.tt) / h2);
            entries.emplace_back(row, idx(i + 1, j), w.ss / h2);
            entries.emplace_back(row, idx(i - 1, j), w.ss / h2);
            entries.emplace_back(row, idx(i, j + 1), w.tt / h2);
            entries.emplace_back(row, idx(i, j - 1), w.tt / h2);
            if (w.st != 0.0) {
                const double c = 0.25 * w.st / h2;
                entries.emplace_back(row, idx(i + 1, j + 1), c);
                entries.emplace_back(row, idx(i + 1, j - 1), -c);
                entries.emplace_back(row, idx(i - 1, j + 1), -c);
                entries.emplace_back(row, idx(i - 1, j - 1), c);
            }
        }
    }
    Eigen::SparseMatrix<double> mat(grid.points(), grid.points());
    mat.setFromTriplets(entries.begin(), entries.end());
    return mat;
}

RealGrid laplacian(const RealGrid& f, const SpectralOps& ops, DiffBackend backend) {
    return backend == DiffBackend::spectral ? ops.laplacian(f) : stencil_laplacian(f, ops.grid());
}

}  // namespace phl

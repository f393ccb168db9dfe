#pragma once

#include <complex>
#include <functional>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace phl {

// Grid functions on the torus; entry (i, j) sits at s = i/n, t = j/n.
using RealGrid = Eigen::MatrixXd;
using ComplexGrid = Eigen::MatrixXcd;

// Flat torus C / (Z + modulus Z), sampled at z = s + modulus * t.
class TorusGrid {
public:
    explicit TorusGrid(int n, std::complex<double> modulus = {0.0, 1.0});

    int n() const { return n_; }
    std::complex<double> modulus() const { return modulus_; }
    double spacing() const { return 1.0 / n_; }
    Eigen::Index points() const { return static_cast<Eigen::Index>(n_) * n_; }

    std::complex<double> point(int i, int j) const;
    // Lattice coordinates (s, t) of a point of the plane.
    std::pair<double, double> lattice_coords(double x, double y) const;
    double area() const { return modulus_.imag(); }

    RealGrid sample(const std::function<double(double, double)>& f) const;
    ComplexGrid sample_complex(const std::function<std::complex<double>(double, double)>& f) const;

private:
    int n_;
    std::complex<double> modulus_;
};

enum class DiffBackend { spectral, stencil };

// FFT-based differentiation and interpolation. Thread-safe after construction.
class SpectralOps {
public:
    explicit SpectralOps(const TorusGrid& grid);
    ~SpectralOps();
    SpectralOps(const SpectralOps&) = delete;
    SpectralOps& operator=(const SpectralOps&) = delete;
    SpectralOps(SpectralOps&&) noexcept;
    SpectralOps& operator=(SpectralOps&&) noexcept;

    const TorusGrid& grid() const;

    ComplexGrid forward(const ComplexGrid& values) const;
    ComplexGrid backward(const ComplexGrid& coeffs) const;  // normalised inverse

    RealGrid dx(const RealGrid& f) const;
    RealGrid dy(const RealGrid& f) const;
    RealGrid laplacian(const RealGrid& f) const;
    ComplexGrid dx(const ComplexGrid& f) const;
    ComplexGrid dy(const ComplexGrid& f) const;

    // Symbol of the Laplacian at wavenumber index (i, j).
    double laplacian_symbol(int i, int j) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Trigonometric interpolant of a real grid function, evaluable anywhere with first derivatives.
class FourierInterpolant {
public:
    FourierInterpolant(const SpectralOps& ops, const ComplexGrid& values);

    struct Sample {
        std::complex<double> value;
        std::complex<double> dx;
        std::complex<double> dy;
    };
    Sample operator()(double x, double y) const;

private:
    TorusGrid grid_;
    ComplexGrid coeffs_;
};

// Second-order finite differences; the Laplacian uses the 9-point stencil on skew lattices
// (5-point when the modulus is purely imaginary).
RealGrid stencil_dx(const RealGrid& f, const TorusGrid& grid);
RealGrid stencil_dy(const RealGrid& f, const TorusGrid& grid);
RealGrid stencil_laplacian(const RealGrid& f, const TorusGrid& grid);
Eigen::SparseMatrix<double> stencil_laplacian_matrix(const TorusGrid& grid);

RealGrid laplacian(const RealGrid& f, const SpectralOps& ops, DiffBackend backend);

inline Eigen::Index flat_index(int i, int j, int n) { return static_cast<Eigen::Index>(j) * n + i; }

}  // namespace phl

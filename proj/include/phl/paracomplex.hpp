#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace phl {

// x + tau*y with tau^2 = 1.
struct ParaComplex {
    double re = 0.0;
    double im_tau = 0.0;

    constexpr ParaComplex() = default;
    constexpr ParaComplex(double x) : re(x) {}
    constexpr ParaComplex(double x, double y) : re(x), im_tau(y) {}

    static constexpr ParaComplex from_idempotent(double plus, double minus) {
        return {0.5 * (plus + minus), 0.5 * (plus - minus)};
    }

    constexpr double plus() const { return re + im_tau; }
    constexpr double minus() const { return re - im_tau; }
    constexpr ParaComplex conj() const { return {re, -im_tau}; }
    constexpr double abs2() const { return re * re - im_tau * im_tau; }
    bool is_zero_divisor(double tol = 0.0) const;

    constexpr ParaComplex& operator+=(ParaComplex b) { re += b.re; im_tau += b.im_tau; return *this; }
    constexpr ParaComplex& operator-=(ParaComplex b) { re -= b.re; im_tau -= b.im_tau; return *this; }
    constexpr ParaComplex& operator*=(ParaComplex b) {
        const double x = re * b.re + im_tau * b.im_tau;
        im_tau = re * b.im_tau + im_tau * b.re;
        re = x;
        return *this;
    }
    friend constexpr ParaComplex operator+(ParaComplex a, ParaComplex b) { return a += b; }
    friend constexpr ParaComplex operator-(ParaComplex a, ParaComplex b) { return a -= b; }
    friend constexpr ParaComplex operator*(ParaComplex a, ParaComplex b) { return a *= b; }
    friend constexpr ParaComplex operator-(ParaComplex a) { return {-a.re, -a.im_tau}; }
    friend constexpr bool operator==(ParaComplex a, ParaComplex b) = default;
};

// Throws std::domain_error on zero divisors.
ParaComplex operator/(ParaComplex a, ParaComplex b);

inline constexpr ParaComplex kTau{0.0, 1.0};
inline constexpr ParaComplex kEPlus{0.5, 0.5};
inline constexpr ParaComplex kEMinus{0.5, -0.5};

ParaComplex pc_mul(ParaComplex a, ParaComplex b);
double pc_abs2(ParaComplex z);
std::pair<double, double> idempotent_split(ParaComplex z);
ParaComplex idempotent_join(double plus, double minus);
// sign * cosh(t) + tau * sinh(t): the unit para-complex numbers.
ParaComplex unit_hyperbolic(double t, int sign = 1);

// Element of R_tau (x) C in idempotent coordinates.
struct BiComplex {
    std::complex<double> plus{};
    std::complex<double> minus{};

    BiComplex tau_conj() const { return {minus, plus}; }
    BiComplex complex_conj() const { return {std::conj(plus), std::conj(minus)}; }
    double max_abs() const;

    BiComplex& operator+=(const BiComplex& b) { plus += b.plus; minus += b.minus; return *this; }
    BiComplex& operator-=(const BiComplex& b) { plus -= b.plus; minus -= b.minus; return *this; }
    friend BiComplex operator+(BiComplex a, const BiComplex& b) { return a += b; }
    friend BiComplex operator-(BiComplex a, const BiComplex& b) { return a -= b; }
    friend BiComplex operator*(const BiComplex& a, const BiComplex& b) {
        return {a.plus * b.plus, a.minus * b.minus};
    }
    friend BiComplex operator*(std::complex<double> s, const BiComplex& b) {
        return {s * b.plus, s * b.minus};
    }
};

// Vector over R_tau stored as its idempotent pair.
struct PCVector {
    Eigen::VectorXd plus;
    Eigen::VectorXd minus;

    PCVector() = default;
    PCVector(Eigen::VectorXd p, Eigen::VectorXd m);
    static PCVector zero(Eigen::Index n);
    static PCVector real(const Eigen::VectorXd& v) { return {v, v}; }
    static PCVector from_cartesian(const Eigen::VectorXd& re, const Eigen::VectorXd& im_tau);

    Eigen::Index size() const { return plus.size(); }
    Eigen::VectorXd re() const { return 0.5 * (plus + minus); }
    Eigen::VectorXd im_tau() const { return 0.5 * (plus - minus); }
    ParaComplex operator[](Eigen::Index i) const { return ParaComplex::from_idempotent(plus(i), minus(i)); }
    PCVector tau() const { return {plus, -minus}; }
    double norm() const { return std::sqrt(plus.squaredNorm() + minus.squaredNorm()); }
    // Stacked real coordinates (plus; minus).
    Eigen::VectorXd stacked() const;
    static PCVector from_stacked(const Eigen::VectorXd& v);

    PCVector& operator+=(const PCVector& b);
    PCVector& operator-=(const PCVector& b);
    friend PCVector operator+(PCVector a, const PCVector& b) { return a += b; }
    friend PCVector operator-(PCVector a, const PCVector& b) { return a -= b; }
    friend PCVector operator*(ParaComplex s, const PCVector& v) {
        return {s.plus() * v.plus, s.minus() * v.minus};
    }
    friend PCVector operator*(double s, const PCVector& v) { return {s * v.plus, s * v.minus}; }
};

// Vector over the bicomplex numbers, idempotent pair of complex vectors.
struct BCVector {
    Eigen::VectorXcd plus;
    Eigen::VectorXcd minus;

    static BCVector zero(Eigen::Index n);
    static BCVector from(const PCVector& v);
    Eigen::Index size() const { return plus.size(); }
    BCVector complex_conj() const { return {plus.conjugate(), minus.conjugate()}; }
    BCVector tau() const { return {plus, -minus}; }
    double norm() const { return std::sqrt(plus.squaredNorm() + minus.squaredNorm()); }

    BCVector& operator+=(const BCVector& b);
    BCVector& operator-=(const BCVector& b);
    friend BCVector operator+(BCVector a, const BCVector& b) { return a += b; }
    friend BCVector operator-(BCVector a, const BCVector& b) { return a -= b; }
    friend BCVector operator*(std::complex<double> s, const BCVector& v) {
        return {s * v.plus, s * v.minus};
    }
    friend BCVector operator*(const BiComplex& s, const BCVector& v) {
        return {s.plus * v.plus, s.minus * v.minus};
    }
};

// Square matrix over R_tau as its idempotent pair (M+, M-).
struct PCMatrix {
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;

    PCMatrix() = default;
    PCMatrix(Eigen::MatrixXd p, Eigen::MatrixXd m);
    static PCMatrix identity(Eigen::Index n);
    static PCMatrix real(const Eigen::MatrixXd& a) { return {a, a}; }

    Eigen::Index size() const { return plus.rows(); }
    ParaComplex operator()(Eigen::Index i, Eigen::Index j) const {
        return ParaComplex::from_idempotent(plus(i, j), minus(i, j));
    }
    PCVector col(Eigen::Index j) const { return {plus.col(j), minus.col(j)}; }
    PCMatrix tau_conj() const { return {minus, plus}; }
    PCMatrix transpose() const { return {plus.transpose(), minus.transpose()}; }
    PCMatrix inverse() const;

    friend PCMatrix operator*(const PCMatrix& a, const PCMatrix& b) {
        return {a.plus * b.plus, a.minus * b.minus};
    }
    friend PCVector operator*(const PCMatrix& a, const PCVector& v) {
        return {a.plus * v.plus, a.minus * v.minus};
    }
    friend BCVector operator*(const PCMatrix& a, const BCVector& v) {
        return {a.plus.cast<std::complex<double>>() * v.plus, a.minus.cast<std::complex<double>>() * v.minus};
    }
    friend PCMatrix operator+(const PCMatrix& a, const PCMatrix& b) {
        return {a.plus + b.plus, a.minus + b.minus};
    }
    friend PCMatrix operator-(const PCMatrix& a, const PCMatrix& b) {
        return {a.plus - b.plus, a.minus - b.minus};
    }
};

// The anti-diagonal symmetric form Q of size n.
Eigen::MatrixXd anti_diagonal_form(Eigen::Index n);

// q(z, w) = z^t Q conj_tau(w).
ParaComplex q_form(const PCVector& z, const PCVector& w);
// q extended C-sesquilinearly: (V+^t Q conj(W-), V-^t Q conj(W+)).
BiComplex qc_form(const BCVector& v, const BCVector& w);
// The C-bilinear companion: qc_form(v, conj(w)).
BiComplex qc_bilinear(const BCVector& v, const BCVector& w);

// A e+ + Q (A^-1)^t Q e-. Throws std::invalid_argument unless det A = 1 (rel. 1e-10).
PCMatrix psi_iso(const Eigen::MatrixXd& a);

// Max deviation from SU(n, R_tau, Q): minus block vs Q (plus^-1)^t Q, and |det plus - 1|.
double su_defect(const PCMatrix& m);
bool in_su(const PCMatrix& m, double tol = 1e-12);

}  // namespace phl

#include "phl/paracomplex.hpp"

#include <cmath>
#include <stdexcept>

namespace phl {

bool ParaComplex::is_zero_divisor(double tol) const { return std::abs(abs2()) <= tol; }

ParaComplex operator/(ParaComplex a, ParaComplex b) {
    if (b.plus() == 0.0 || b.minus() == 0.0) {
        throw std::domain_error("division by a zero divisor of R_tau");
    }
    return ParaComplex::from_idempotent(a.plus() / b.plus(), a.minus() / b.minus());
}

ParaComplex pc_mul(ParaComplex a, ParaComplex b) { return a * b; }

double pc_abs2(ParaComplex z) { return z.abs2(); }

std::pair<double, double> idempotent_split(ParaComplex z) { return {z.plus(), z.minus()}; }

ParaComplex idempotent_join(double plus, double minus) {
    return ParaComplex::from_idempotent(plus, minus);
}

ParaComplex unit_hyperbolic(double t, int sign) {
    return {(sign < 0 ? -1.0 : 1.0) * std::cosh(t), std::sinh(t)};
}

double BiComplex::max_abs() const { return std::max(std::abs(plus), std::abs(minus)); }

PCVector::PCVector(Eigen::VectorXd p, Eigen::VectorXd m) : plus(std::move(p)), minus(std::move(m)) {
    if (plus.size() != minus.size()) {
        throw std::invalid_argument("PCVector: idempotent parts differ in size");
    }
}

PCVector PCVector::zero(Eigen::Index n) { return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)}; }

PCVector PCVector::from_cartesian(const Eigen::VectorXd& re, const Eigen::VectorXd& im_tau) {
    return {re + im_tau, re - im_tau};
}

Eigen::VectorXd PCVector::stacked() const {
    Eigen::VectorXd out(2 * size());
    out << plus, minus;
    return out;
}

PCVector PCVector::from_stacked(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size() / 2;
    return {v.head(n), v.tail(n)};
}

PCVector& PCVector::operator+=(const PCVector& b) {
    plus += b.plus;
    minus += b.minus;
    return *this;
}

PCVector& PCVector::operator-=(const PCVector& b) {
    plus -= b.plus;
    minus -= b.minus;
    return *this;
}

BCVector BCVector::zero(Eigen::Index n) {
    return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
}

BCVector BCVector::from(const PCVector& v) {
    return {v.plus.cast<std::complex<double>>(), v.minus.cast<std::complex<double>>()};
}

BCVector& BCVector::operator+=(const BCVector& b) {
    plus += b.plus;
    minus += b.minus;
    return *this;
}

BCVector& BCVector::operator-=(const BCVector& b) {
    plus -= b.plus;
    minus -= b.minus;
    return *this;
}

PCMatrix::PCMatrix(Eigen::MatrixXd p, Eigen::MatrixXd m) : plus(std::move(p)), minus(std::move(m)) {
    if (plus.rows() != plus.cols() || minus.rows() != minus.cols() || plus.rows() != minus.rows()) {
        throw std::invalid_argument("PCMatrix: idempotent parts must be square and of equal size");
    }
}

PCMatrix PCMatrix::identity(Eigen::Index n) {
    return {Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n)};
}

PCMatrix PCMatrix::inverse() const { return {plus.inverse(), minus.inverse()}; }

Eigen::MatrixXd anti_diagonal_form(Eigen::Index n) {
    return Eigen::MatrixXd::Identity(n, n).rowwise().reverse();
}

namespace {

// Q v without forming Q: reverses the entries.
template <typename V>
auto apply_q(const V& v) {
    return v.reverse();
}

}  // namespace

ParaComplex q_form(const PCVector& z, const PCVector& w) {
    if (z.size() != w.size()) {
        throw std::invalid_argument("q_form: dimension mismatch");
    }
    const Eigen::VectorXd qwm = apply_q(w.minus);
    const Eigen::VectorXd qwp = apply_q(w.plus);
    return ParaComplex::from_idempotent(z.plus.dot(qwm), z.minus.dot(qwp));
}

BiComplex qc_bilinear(const BCVector& v, const BCVector& w) {
    if (v.size() != w.size()) {
        throw std::invalid_argument("qc_bilinear: dimension mismatch");
    }
    const Eigen::VectorXcd qwm = apply_q(w.minus);
    const Eigen::VectorXcd qwp = apply_q(w.plus);
    // transpose(), not adjoint(): bilinear in the complex sense.
    return {(v.plus.transpose() * qwm)(0), (v.minus.transpose() * qwp)(0)};
}

BiComplex qc_form(const BCVector& v, const BCVector& w) { return qc_bilinear(v, w.complex_conj()); }

PCMatrix psi_iso(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("psi_iso: matrix must be square");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("psi_iso: singular matrix");
    }
    const double det = lu.determinant();
    if (std::abs(det - 1.0) > 1e-10) {
        throw std::invalid_argument("psi_iso: determinant must be 1");
    }
    const Eigen::MatrixXd q = anti_diagonal_form(a.rows());
    return {a, q * lu.inverse().transpose() * q};
}

double su_defect(const PCMatrix& m) {
    const Eigen::MatrixXd q = anti_diagonal_form(m.size());
    const Eigen::MatrixXd expected = q * m.plus.inverse().transpose() * q;
    const double block = (m.minus - expected).cwiseAbs().maxCoeff();
    return std::max(block, std::abs(m.plus.determinant() - 1.0));
}

bool in_su(const PCMatrix& m, double tol) { return su_defect(m) <= tol; }

}  // namespace phl

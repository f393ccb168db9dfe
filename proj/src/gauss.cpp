#include "phl/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phl/frenet.hpp"
#include "phl/immersion.hpp"

namespace phl {

SymmetricPoint::SymmetricPoint(const Eigen::MatrixXd& h, double tol) : h_(0.5 * (h + h.transpose())) {
    if (h.rows() != h.cols()) throw std::invalid_argument("SymmetricPoint: matrix must be square");
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h_).eigenvalues();
    if (!(ev(0) > 0.0)) throw std::invalid_argument("SymmetricPoint: not positive definite");
    const double det = ev.prod();
    if (std::abs(det - 1.0) > tol) throw std::invalid_argument("SymmetricPoint: determinant differs from 1");
}

Eigen::VectorXd SymmetricPoint::eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h_).eigenvalues();
}

Eigen::MatrixXd holomorphic_gauge(const std::vector<double>& h) {
    const auto m = static_cast<Eigen::Index>(h.size());
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(2 * m + 1);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double w = h[static_cast<std::size_t>(k)];
        if (!(w > 0.0)) throw std::invalid_argument("holomorphic_gauge: metric weights must be positive");
        diag(2 * k + 1) = std::sqrt(w);
        diag(2 * k + 2) = 1.0 / std::sqrt(w);
    }
    return diag.asDiagonal();
}

Eigen::MatrixXd gauss_lift(const PCMatrix& frame) { return frame.plus; }

Eigen::MatrixXd gauss_lift(const PCMatrix& frame, const Eigen::MatrixXd& gauge) { return frame.plus * gauge; }

double lift_defect(const PCMatrix& frame) {
    const Eigen::MatrixXd expected = frame.plus.inverse().transpose().reverse();
    return std::max(std::abs(frame.plus.determinant() - 1.0), (frame.minus - expected).cwiseAbs().maxCoeff());
}

SymmetricPoint symmetric_point(const Eigen::MatrixXd& lift) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lift);
    if (!lu.isInvertible()) throw std::invalid_argument("symmetric_point: singular lift");
    const Eigen::MatrixXd inv = lu.inverse();
    return SymmetricPoint(inv.transpose() * inv);
}

namespace {

Eigen::MatrixXd metric_at(const ConnectionField& conn, const PCMatrix& frame, std::complex<double> from,
                          std::complex<double> to, double step) {
    TransportOptions opts;
    opts.step = std::min(step, 1e-3);
    return symmetric_point(gauss_lift(transport_segment(conn, frame, from, to, opts))).matrix();
}

}  // namespace

MinimalityResiduals minimality_residuals(const ConnectionField& conn, const PCMatrix& frame,
                                         std::complex<double> point, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("minimality_residuals: step must be positive");
    auto at = [&](int a, int b) { return metric_at(conn, frame, point, point + step * std::complex<double>(a, b), step); };
    const Eigen::MatrixXd h0 = at(0, 0);
    const Eigen::MatrixXd hxp = at(1, 0), hxm = at(-1, 0), hyp = at(0, 1), hym = at(0, -1);
    const Eigen::MatrixXd h0inv = h0.inverse();

    MinimalityResiduals out;
    out.step = step;
    const Eigen::MatrixXcd hx = ((hxp - hxm) / (2.0 * step)).cast<std::complex<double>>();
    const Eigen::MatrixXcd hy = ((hyp - hym) / (2.0 * step)).cast<std::complex<double>>();
    const Eigen::MatrixXcd az = h0inv.cast<std::complex<double>>() * (0.5 * (hx - std::complex<double>(0.0, 1.0) * hy));
    out.conformality = std::abs((az * az).trace());

    // d_i (H^{-1} d_i H) with H^{-1} and the derivative taken at the half-way points.
    auto flux = [&](const Eigen::MatrixXd& near, const Eigen::MatrixXd& far) {
        return Eigen::MatrixXd((0.5 * (near + far)).inverse() * (far - near) / step);
    };
    const Eigen::MatrixXd div = (flux(h0, hxp) - flux(hxm, h0)) / step + (flux(h0, hyp) - flux(hym, h0)) / step;
    out.tension = (0.5 * div).cwiseAbs().maxCoeff();
    return out;
}

MinimalityReport minimality_report(const ConnectionField& conn, const std::vector<std::complex<double>>& points,
                                   double step) {
    if (points.empty()) throw std::invalid_argument("minimality_report: no points");
    MinimalityReport rep;
    std::vector<PCMatrix> frames;
    TransportOptions opts;
    PCMatrix frame = initial_frame(conn.m());
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k > 0) frame = transport_segment(conn, frame, points[k - 1], points[k], opts);
        frames.push_back(frame);
    }
    for (const double s : {step, 0.5 * step}) {
        MinimalityResiduals worst;
        worst.step = s;
        for (std::size_t k = 0; k < points.size(); ++k) {
            const MinimalityResiduals r = minimality_residuals(conn, frames[k], points[k], s);
            worst.conformality = std::max(worst.conformality, r.conformality);
            worst.tension = std::max(worst.tension, r.tension);
        }
        rep.levels.push_back(worst);
    }
    rep.conformality = rep.levels[0].conformality;
    rep.tension = rep.levels[0].tension;
    auto order = [](double coarse, double fine) {
        return (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : 0.0;
    };
    rep.tension_order = order(rep.levels[0].tension, rep.levels[1].tension);
    rep.conformality_order = order(rep.levels[0].conformality, rep.levels[1].conformality);
    return rep;
}

double gauss_subspace_defect(const PCMatrix& frame) {
    const int m = static_cast<int>((frame.size() - 1) / 2);
    const Eigen::Index dim = frame.size();
    const auto blocks = frenet_blocks(frame);
    Eigen::MatrixXd from_blocks(2 * dim, dim), from_frame(2 * dim, dim);
    from_blocks.col(0) = to_ambient(frame, sigma_local(m)).stacked();
    Eigen::Index col = 1;
    for (int j = 1; j <= 2 * m; j += 2) {
        for (const PCVector& v : blocks[static_cast<std::size_t>(j - 1)]) from_blocks.col(col++) = v.tau().stacked();
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(i) = 1.0;
        from_frame.col(i) = to_ambient(frame, PCVector::real(e).tau()).stacked();
    }
    const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(from_blocks).householderQ() *
                               Eigen::MatrixXd::Identity(2 * dim, dim);
    const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(from_frame).householderQ() *
                               Eigen::MatrixXd::Identity(2 * dim, dim);
    return Eigen::JacobiSVD<Eigen::MatrixXd>(qa - qb * (qb.transpose() * qa)).singularValues()(0);
}

}  // namespace phl

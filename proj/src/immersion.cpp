#include "phl/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phl {

namespace {

Eigen::MatrixXd q_conjugate_transpose(const Eigen::MatrixXd& a) {
    // Q A^t Q without forming Q.
    return a.transpose().reverse();
}

struct Increment {
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
};

Increment generator(const ConnectionField& conn, std::complex<double> at, std::complex<double> dir) {
    const LocalConnection local = conn.at(at.real(), at.imag());
    Eigen::MatrixXd plus = local.plus(dir.real(), dir.imag());
    Eigen::MatrixXd minus = -q_conjugate_transpose(plus);
    return {std::move(plus), std::move(minus)};
}

void retract(PCMatrix& g) {
    const double det = g.plus.determinant();
    if (!(det > 0.0)) throw std::runtime_error("frame transport: frame lost orientation");
    g.plus *= std::pow(det, -1.0 / static_cast<double>(g.size()));
    g.minus = q_conjugate_transpose(g.plus.inverse());
}

// SU-membership defect relative to the size of the frame.
double relative_drift(const PCMatrix& g) {
    const Eigen::MatrixXd expected = q_conjugate_transpose(g.plus.inverse());
    const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
    return std::max((g.minus - expected).cwiseAbs().maxCoeff() / scale, std::abs(g.plus.determinant() - 1.0));
}

double max_norm(const PCMatrix& a) {
    return std::max(a.plus.cwiseAbs().maxCoeff(), a.minus.cwiseAbs().maxCoeff());
}

}  // namespace

PCVector to_ambient(const PCMatrix& frame, const PCVector& local) {
    return {frame.plus * local.plus, frame.minus * local.minus.reverse()};
}

PCVector sigma_local(int m) {
    const Eigen::Index dim = 2 * m + 1;
    Eigen::VectorXd plus = Eigen::VectorXd::Zero(dim);
    plus(0) = 1.0;
    return {plus, -plus};
}

HPoint sigma_of(const PCMatrix& frame) {
    const int m = static_cast<int>((frame.size() - 1) / 2);
    return HPoint(to_ambient(frame, sigma_local(m)), 1e-6);
}

PCMatrix initial_frame(int m) { return PCMatrix::identity(2 * m + 1); }

PCMatrix transport_segment(const ConnectionField& conn, const PCMatrix& start, std::complex<double> from,
                           std::complex<double> to, const TransportOptions& options, double* max_drift) {
    if (!(options.step > 0.0)) throw std::invalid_argument("transport: step must be positive");
    const std::complex<double> dir = to - from;
    const double length = std::abs(dir);
    PCMatrix g = start;
    if (length == 0.0) return g;
    const int steps = std::max(1, static_cast<int>(std::ceil(length / options.step - 1e-9)));
    const std::complex<double> dz = dir / static_cast<double>(steps);
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
        const std::complex<double> z0 = from + static_cast<double>(k) * dz;
        const Increment a = generator(conn, z0, dz);
        const Increment b = generator(conn, z0 + 0.5 * dz, dz);
        const Increment d = generator(conn, z0 + dz, dz);
        // Classical RK4 for a right-multiplied linear system.
        auto rk4 = [](const Eigen::MatrixXd& y, const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2,
                      const Eigen::MatrixXd& a3) {
            const Eigen::MatrixXd k1 = y * a1;
            const Eigen::MatrixXd k2 = (y + 0.5 * k1) * a2;
            const Eigen::MatrixXd k3 = (y + 0.5 * k2) * a2;
            const Eigen::MatrixXd k4 = (y + k3) * a3;
            return Eigen::MatrixXd(y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
        };
        g = PCMatrix(rk4(g.plus, a.plus, b.plus, d.plus), rk4(g.minus, a.minus, b.minus, d.minus));
        const double drift = relative_drift(g);
        if (drift > options.drift_limit) {
            throw std::runtime_error("frame transport: step too large (drift " + std::to_string(drift) + ")");
        }
        worst = std::max(worst, drift);
        if (options.retract) retract(g);
    }
    if (max_drift != nullptr) *max_drift = std::max(*max_drift, worst);
    return g;
}

FrameField transport_frame(const ConnectionField& conn, const std::vector<std::complex<double>>& path,
                           const PCMatrix& start, const TransportOptions& options) {
    if (path.empty()) throw std::invalid_argument("transport_frame: empty path");
    if (start.size() != 2 * conn.m() + 1) throw std::invalid_argument("transport_frame: frame size mismatch");
    FrameField out;
    out.path = path;
    out.frames.push_back(start);
    out.sigma.push_back(sigma_of(start));
    out.drift.push_back(0.0);
    double accumulated = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        double seg_drift = 0.0;
        PCMatrix next = transport_segment(conn, out.frames.back(), path[k - 1], path[k], options, &seg_drift);
        accumulated += seg_drift;
        out.max_step_drift = std::max(out.max_step_drift, seg_drift);
        out.sigma.push_back(sigma_of(next));
        out.frames.push_back(std::move(next));
        out.drift.push_back(accumulated);
    }
    return out;
}

ImmersionSample immerse_at(const ConnectionField& conn, const PCMatrix& frame, std::complex<double> point,
                           double delta) {
    const int m = conn.m();
    TransportOptions opts;
    opts.step = delta;
    auto sigma_near = [&](std::complex<double> offset) {
        return to_ambient(transport_segment(conn, frame, point, point + offset, opts), sigma_local(m));
    };
    const PCVector s0 = to_ambient(frame, sigma_local(m));
    const PCVector sxp = sigma_near({delta, 0.0});
    const PCVector sxm = sigma_near({-delta, 0.0});
    const PCVector syp = sigma_near({0.0, delta});
    const PCVector sym = sigma_near({0.0, -delta});
    const PCVector sx = (0.5 / delta) * (sxp - sxm);
    const PCVector sy = (0.5 / delta) * (syp - sym);

    const std::complex<double> i(0.0, 1.0);
    ImmersionSample out{point, HPoint(s0, 1e-6), {}, {}};
    const BCVector bx = BCVector::from(sx);
    const BCVector by = BCVector::from(sy);
    out.sigma_z = 0.5 * (bx - i * by);
    out.sigma_zbar = 0.5 * (bx + i * by);
    const ParaComplex n = q_form(s0, s0);
    out.sigma_defect = std::max(std::abs(n.plus() + 1.0), std::abs(n.minus() + 1.0));
    out.q_z_zbar = qc_form(out.sigma_z, out.sigma_zbar);
    out.q_z_z = qc_form(out.sigma_z, out.sigma_z);
    out.q_zbar_zbar = qc_form(out.sigma_zbar, out.sigma_zbar);
    out.h1 = conn.field().sample(point.real(), point.imag()).h[0];

    // d_zbar d_z = Laplacian / 4, five-point stencil.
    const PCVector lap = (1.0 / (delta * delta)) * (sxp + sxm + syp + sym - 4.0 * s0);
    const PCVector residual = 0.25 * lap - out.h1 * s0;
    const double gx = q_form(residual, sx).re;
    const double gy = q_form(residual, sy).re;
    out.harmonic_tangential = std::sqrt(gx * gx + gy * gy) / std::sqrt(2.0 * out.h1);
    out.harmonic_full = residual.norm();
    return out;
}

std::vector<ImmersionSample> immerse(const ConnectionField& conn, const FrameField& frames, double delta,
                                     std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("immerse: stride must be positive");
    std::vector<ImmersionSample> out;
    for (std::size_t k = 0; k < frames.frames.size(); k += stride) {
        out.push_back(immerse_at(conn, frames.frames[k], frames.path[k], delta));
    }
    return out;
}

PlaquetteReport plaquette_flatness(const ConnectionField& conn, std::complex<double> corner, double side) {
    PlaquetteReport rep;
    const PCMatrix id = initial_frame(conn.m());
    for (int level = 0; level < 3; ++level) {
        const double s = side / std::pow(2.0, level);
        TransportOptions opts;
        opts.step = s;
        const std::complex<double> c1 = corner + s;
        const std::complex<double> c2 = c1 + std::complex<double>(0.0, s);
        const std::complex<double> c3 = corner + std::complex<double>(0.0, s);
        PCMatrix g = transport_segment(conn, id, corner, c1, opts);
        g = transport_segment(conn, g, c1, c2, opts);
        g = transport_segment(conn, g, c2, c3, opts);
        g = transport_segment(conn, g, c3, corner, opts);
        rep.sides.push_back(s);
        rep.defects.push_back(max_norm(g - id));
    }
    // Least-squares slope of log(defect) against log(side).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(rep.sides.size());
    for (std::size_t k = 0; k < rep.sides.size(); ++k) {
        const double lx = std::log(rep.sides[k]);
        const double ly = std::log(std::max(rep.defects[k], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return rep;
}

double holonomy_invariance(const ConnectionField& conn, std::complex<double> from, std::complex<double> to,
                           const TransportOptions& options) {
    const PCMatrix id = initial_frame(conn.m());
    const std::complex<double> via_x(to.real(), from.imag());
    const std::complex<double> via_y(from.real(), to.imag());
    const PCMatrix a = transport_segment(conn, transport_segment(conn, id, from, via_x, options), via_x, to, options);
    const PCMatrix b = transport_segment(conn, transport_segment(conn, id, from, via_y, options), via_y, to, options);
    return max_norm(a - b);
}

}  // namespace phl

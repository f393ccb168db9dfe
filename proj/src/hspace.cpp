#include "phl/hspace.hpp"

#include <cmath>
#include <stdexcept>

namespace phl {

namespace {

double leading_sign(const Eigen::VectorXd& v, double tol = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol) {
            return v(i) > 0.0 ? 1.0 : -1.0;
        }
    }
    return 1.0;
}

Eigen::VectorXd unit_projective(const Eigen::VectorXd& v) {
    const double n = v.norm();
    if (n == 0.0) {
        throw std::invalid_argument("projective class of the zero vector");
    }
    return v * (leading_sign(v) / n);
}

void require_same_base(const TangentVector& a, const TangentVector& b) {
    if ((a.base.lift() - b.base.lift()).norm() > 1e-12 * (1.0 + a.base.lift().norm())) {
        throw std::invalid_argument("tangent vectors live at different base points");
    }
}

}  // namespace

HPoint::HPoint(PCVector lift, double tol) : lift_(std::move(lift)) {
    const ParaComplex n = q_form(lift_, lift_);
    if (std::abs(n.re + 1.0) > tol || std::abs(n.im_tau) > tol) {
        throw std::invalid_argument("HPoint: lift is not on the quadric q(z,z) = -1");
    }
}

HPoint HPoint::canonical(Eigen::Index n) {
    Eigen::VectorXd plus = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd minus = Eigen::VectorXd::Zero(n + 1);
    plus(0) = 1.0;
    minus(n) = -1.0;
    return HPoint(PCVector(plus, minus));
}

HPoint HPoint::normalized() const {
    // Unit scalars act by (l, 1/l) on the idempotent blocks.
    const double scale = leading_sign(lift_.plus) / lift_.plus.norm();
    return HPoint(PCVector(lift_.plus * scale, lift_.minus / scale), 1e-8);
}

bool HPoint::equivalent(const HPoint& other, double tol) const {
    if (other.ambient_dim() != ambient_dim()) return false;
    return (normalized().lift() - other.normalized().lift()).norm() <= tol;
}

FlagPoint FlagPoint::normalized() const {
    return {unit_projective(line), unit_projective(functional)};
}

double FlagPoint::distance(const FlagPoint& other) const {
    const FlagPoint a = normalized();
    const FlagPoint b = other.normalized();
    return std::max((a.line - b.line).norm(), (a.functional - b.functional).norm());
}

TangentVector project_tangent(const HPoint& z, const PCVector& v) {
    // q(z,z) = -1, so v + q(v,z) z is q-orthogonal to z.
    const ParaComplex c = q_form(v, z.lift());
    return {z, v + c * z.lift()};
}

TangentVector para_structure(const TangentVector& t) { return {t.base, t.vec.tau()}; }

double metric_g(const TangentVector& u, const TangentVector& v) {
    require_same_base(u, v);
    return q_form(u.vec, v.vec).re;
}

double kahler_form(const TangentVector& u, const TangentVector& v) {
    return metric_g(u, para_structure(v));
}

double tangency_defect(const TangentVector& t) {
    const ParaComplex c = q_form(t.vec, t.base.lift());
    return std::max(std::abs(c.plus()), std::abs(c.minus()));
}

double riemann_tensor(const TangentVector& x, const TangentVector& y, const TangentVector& z,
                      const TangentVector& w, double kappa) {
    require_same_base(x, y);
    require_same_base(x, z);
    require_same_base(x, w);
    const TangentVector px = para_structure(x);
    const TangentVector py = para_structure(y);
    const TangentVector pz = para_structure(z);
    const double bracket = metric_g(x, z) * metric_g(y, w) - metric_g(y, z) * metric_g(x, w) +
                           metric_g(x, pz) * metric_g(py, w) - metric_g(y, pz) * metric_g(px, w) +
                           2.0 * metric_g(x, py) * metric_g(pz, w);
    return -0.25 * kappa * bracket;
}

double sectional_curvature(const TangentVector& x, const TangentVector& y, double kappa) {
    const double area = metric_g(x, x) * metric_g(y, y) - std::pow(metric_g(x, y), 2);
    if (std::abs(area) < 1e-14) {
        throw std::invalid_argument("sectional_curvature: degenerate plane");
    }
    return -riemann_tensor(x, y, x, y, kappa) / area;
}

namespace {

// Lift of the quadrilateral corner parameter (a, b), renormalised onto q = -1.
PCVector chart_point(const HPoint& z, const PCVector& x, const PCVector& y, double a, double b) {
    PCVector p = z.lift() + a * x + b * y;
    const double n = q_form(p, p).re;
    return (1.0 / std::sqrt(-n)) * p;
}

// Transport along the chart segment from (a0,b0) to (a1,b1). The lift is not horizontal,
// so the equation carries the gauge term: V' = q(V, c') c - q(c', c) V.
PCVector transport_segment(const HPoint& z, const PCVector& x, const PCVector& y, PCVector v,
                           double a0, double b0, double a1, double b1, int substeps) {
    const double da = a1 - a0;
    const double db = b1 - b0;
    auto rhs = [&](double t, const PCVector& vv) {
        const PCVector c = chart_point(z, x, y, a0 + t * da, b0 + t * db);
        // exact derivative of the normalised chart along the segment
        const PCVector raw = z.lift() + (a0 + t * da) * x + (b0 + t * db) * y;
        const PCVector draw = da * x + db * y;
        const double n = q_form(raw, raw).re;
        const double dn = 2.0 * q_form(raw, draw).re;
        const double s = 1.0 / std::sqrt(-n);
        const double ds = 0.5 * dn / std::pow(-n, 1.5);
        const PCVector dc = s * draw + ds * raw;
        return q_form(vv, dc) * c - q_form(dc, c) * vv;
    };
    const double h = 1.0 / substeps;
    for (int k = 0; k < substeps; ++k) {
        const double t = k * h;
        const PCVector k1 = rhs(t, v);
        const PCVector k2 = rhs(t + 0.5 * h, v + (0.5 * h) * k1);
        const PCVector k3 = rhs(t + 0.5 * h, v + (0.5 * h) * k2);
        const PCVector k4 = rhs(t + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return v;
}

}  // namespace

double holonomy_riemann(const TangentVector& x, const TangentVector& y, const TangentVector& z,
                        const TangentVector& w, double step, int substeps) {
    require_same_base(x, y);
    require_same_base(x, z);
    require_same_base(x, w);
    const HPoint& base = x.base;
    const double e = 0.5 * step;
    const double corners[5][2] = {{-e, -e}, {e, -e}, {e, e}, {-e, e}, {-e, -e}};
    // Start at a corner: bring z there along the diagonal, go round, come back.
    PCVector v = transport_segment(base, x.vec, y.vec, z.vec, 0.0, 0.0, -e, -e, substeps);
    for (int k = 0; k < 4; ++k) {
        v = transport_segment(base, x.vec, y.vec, v, corners[k][0], corners[k][1], corners[k + 1][0],
                              corners[k + 1][1], substeps);
    }
    v = transport_segment(base, x.vec, y.vec, v, -e, -e, 0.0, 0.0, substeps);
    // Holonomy of a small loop: V -> V - step^2 R(x,y)V.
    const TangentVector defect{base, (-1.0 / (step * step)) * (v - z.vec)};
    return metric_g(defect, w);
}

double holonomy_sectional_curvature(const TangentVector& x, const TangentVector& y, double step,
                                    int substeps) {
    const double area = metric_g(x, x) * metric_g(y, y) - std::pow(metric_g(x, y), 2);
    if (std::abs(area) < 1e-14) {
        throw std::invalid_argument("holonomy_sectional_curvature: degenerate plane");
    }
    return -holonomy_riemann(x, y, x, y, step, substeps) / area;
}

FlagPoint flag_coords(const PCVector& z, double tol) {
    const ParaComplex n = q_form(z, z);
    const double scale = std::max(1.0, z.plus.norm() * z.minus.norm());
    if (std::abs(n.plus()) > tol * scale || std::abs(n.minus()) > tol * scale) {
        throw std::invalid_argument("flag_coords: vector is not q-isotropic");
    }
    if (z.plus.norm() <= tol || z.minus.norm() <= tol) {
        throw std::invalid_argument("flag_coords: degenerate isotropic vector (an idempotent block vanishes)");
    }
    return FlagPoint{z.plus, z.minus.reverse()}.normalized();
}

}  // namespace phl

#include "phl/devmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace phl {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d lower(const Eigen::Vector3d& a) { return a.reverse(); }  // Q a

double wrap_angle(double a) {
    double r = std::fmod(a, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r;
}

// y -> a <b, y> - b <a, y>
Eigen::Matrix3d wedge(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return a * lower(b).transpose() - b * lower(a).transpose();
}

double radical_inverse(std::size_t index, std::size_t base) {
    double result = 0.0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return result;
}

UTPoint polar_sample(double r, double theta, double alpha) { return {polar_point(r, theta), wrap_angle(alpha)}; }

}  // namespace

double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.dot(lower(b)); }

void UTPoint::validate() const {
    const double n = minkowski(p, p);
    if (std::abs(n + 1.0) > 1e-12 * std::max(1.0, p.squaredNorm())) {
        throw std::invalid_argument("UTPoint: base point is not on the hyperboloid");
    }
    if (!(minkowski(p, base_point()) < 0.0)) throw std::invalid_argument("UTPoint: base point on the wrong sheet");
}

Eigen::Vector3d base_point() { return Eigen::Vector3d(1.0, 0.0, -1.0) / std::numbers::sqrt2; }

TangentFrame base_frame() {
    return {Eigen::Vector3d(1.0, 0.0, 1.0) / std::numbers::sqrt2, Eigen::Vector3d(0.0, 1.0, 0.0)};
}

Eigen::Vector3d polar_point(double radius, double theta) {
    const TangentFrame f = base_frame();
    return std::cosh(radius) * base_point() + std::sinh(radius) * (std::cos(theta) * f.u + std::sin(theta) * f.v);
}

Eigen::Matrix3d transvection_to(const Eigen::Vector3d& p) {
    const Eigen::Vector3d p0 = base_point();
    const double c = -minkowski(p, p0);
    if (c < 1.0 + 1e-15) return Eigen::Matrix3d::Identity();
    const double r = std::acosh(c);
    const Eigen::Vector3d w = (p - c * p0) / std::sinh(r);
    const Eigen::Matrix3d x = wedge(p0, w);  // x p0 = w, x w = p0
    return Eigen::Matrix3d::Identity() + std::sinh(r) * x + (c - 1.0) * x * x;
}

TangentFrame frame_at(const Eigen::Vector3d& p) {
    const Eigen::Matrix3d b = transvection_to(p);
    const TangentFrame f = base_frame();
    return {b * f.u, b * f.v};
}

Sections sections(const UTPoint& pt, const TangentFrame& frame) {
    const auto& [u, v] = frame;
    const double tol = 1e-10;
    const bool orthonormal = std::abs(minkowski(u, u) - 1.0) < tol && std::abs(minkowski(v, v) - 1.0) < tol &&
                             std::abs(minkowski(u, v)) < tol && std::abs(minkowski(u, pt.p)) < tol &&
                             std::abs(minkowski(v, pt.p)) < tol;
    if (!orthonormal) throw std::invalid_argument("sections: frame is not an orthonormal tangent frame");
    Eigen::Matrix3d m;
    m << pt.p, u, v;
    if (!(m.determinant() < 0.0)) throw std::invalid_argument("sections: frame has the wrong orientation");
    const double c = std::cos(pt.alpha);
    const double s = std::sin(pt.alpha);
    Sections out;
    out.s1 = PCVector::real(c * u + s * v);
    out.s2 = PCVector::real(-s * u + c * v).tau();
    out.s = out.s1 + out.s2;
    return out;
}

Sections sections(const UTPoint& pt) { return sections(pt, frame_at(pt.p)); }

FlagPoint dev(const UTPoint& pt) { return flag_coords(sections(pt).s); }

AnchorReport anchor_check() {
    const TangentFrame f = base_frame();
    const PCVector expected(-std::numbers::sqrt2 * f.u, std::numbers::sqrt2 * f.v);
    const PCVector got = sections({base_point(), 0.75 * kPi}).s;
    AnchorReport rep;
    rep.section_error = (got - expected).stacked().cwiseAbs().maxCoeff();
    rep.flag_error = flag_coords(got).distance(flag_coords(expected));
    return rep;
}

GWStatus gw_membership(const FlagPoint& flag, double lightlike_tol) {
    const FlagPoint f = flag.normalized();
    const Eigen::Vector3d line = f.line;
    const Eigen::Vector3d normal = lower(Eigen::Vector3d(f.functional));  // Q^{-1} = Q
    GWStatus st;
    st.line_norm = minkowski(line, line);
    st.kernel_norm = minkowski(normal, normal);
    st.boundary = std::abs(st.line_norm) < lightlike_tol || std::abs(st.kernel_norm) < lightlike_tol;
    st.member = !st.boundary && st.line_norm > 0.0 && st.kernel_norm > 0.0;
    return st;
}

double transversality_det(const UTPoint& pt) {
    const TangentFrame f = frame_at(pt.p);
    const Sections sec = sections(pt, f);
    const double c = std::cos(pt.alpha);
    const double s = std::sin(pt.alpha);
    const PCVector sigma = PCVector::real(pt.p);
    Eigen::Matrix<double, 6, 6> m;
    m.col(0) = sec.s1.stacked();
    m.col(1) = sec.s2.stacked();
    m.col(2) = PCVector::real(-s * f.u + c * f.v).stacked();
    m.col(3) = PCVector::real(-c * f.u - s * f.v).tau().stacked();
    m.col(4) = (c * sigma - s * sigma.tau()).stacked();
    m.col(5) = (s * sigma + c * sigma.tau()).stacked();
    return m.determinant();
}

UTPoint act(const Eigen::Matrix3d& g, const UTPoint& pt) {
    const Eigen::Vector3d image = g * pt.p;
    const TangentFrame here = frame_at(pt.p);
    const TangentFrame there = frame_at(image);
    const Eigen::Vector3d gu = g * here.u;
    const double rotation = std::atan2(minkowski(gu, there.v), minkowski(gu, there.u));
    return {image, wrap_angle(pt.alpha + rotation)};
}

double equivariance_defect(const Eigen::Matrix3d& g, const UTPoint& pt) {
    const FlagPoint moved = flag_coords(psi_iso(g) * sections(pt).s);
    return dev(act(g, pt)).distance(moved);
}

Eigen::Matrix3d isometry(double radius, double theta, double rotation) {
    const TangentFrame f = base_frame();
    const Eigen::Matrix3d spin = Eigen::Matrix3d::Identity() + std::sin(rotation) * wedge(f.v, f.u) +
                                 (1.0 - std::cos(rotation)) * wedge(f.v, f.u) * wedge(f.v, f.u);
    return transvection_to(polar_point(radius, theta)) * spin;
}

UTPoint dev_preimage(const FlagPoint& flag) {
    if (!gw_membership(flag).member) throw std::invalid_argument("dev_preimage: flag is outside the domain");
    const FlagPoint f = flag.normalized();
    const Eigen::Vector3d line = f.line;
    const Eigen::Vector3d normal = lower(Eigen::Vector3d(f.functional));
    Eigen::Vector3d p = lower(line).cross(lower(normal));
    const double n = minkowski(p, p);
    if (!(n < 0.0)) throw std::invalid_argument("dev_preimage: degenerate flag");
    p /= std::sqrt(-n);
    if (minkowski(p, base_point()) > 0.0) p = -p;
    const TangentFrame frame = frame_at(p);
    const double angle = std::atan2(minkowski(line, frame.v), minkowski(line, frame.u));
    return {p, wrap_angle(angle - kPi / 4.0)};
}

CollisionReport find_collisions(std::span<const UTPoint> points, std::span<const FlagPoint> flags, double tol) {
    if (points.size() != flags.size()) throw std::invalid_argument("find_collisions: size mismatch");
    CollisionReport rep;
    rep.samples = points.size();
    std::vector<Eigen::Matrix<double, 6, 1>> keys;
    keys.reserve(flags.size());
    for (const auto& f : flags) {
        const FlagPoint n = f.normalized();
        Eigen::Matrix<double, 6, 1> k;
        k << n.line, n.functional;
        keys.push_back(k);
    }
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable sort keeps the sweep independent of the input permutation for ties.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a](0) < keys[b](0); });
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const std::size_t i = order[a];
            const std::size_t j = order[b];
            if (keys[j](0) - keys[i](0) > tol) break;
            if ((keys[i] - keys[j]).lpNorm<Eigen::Infinity>() > tol) continue;
            const bool same_base = (points[i].p - points[j].p).norm() <= 1e-12;
            const double turn = std::fmod(std::abs(points[i].alpha - points[j].alpha), kPi);
            const bool same_class = same_base && (turn < 1e-12 || kPi - turn < 1e-12);
            if (same_class) {
                ++rep.identified;
            } else {
                ++rep.collisions;
            }
        }
    }
    return rep;
}

CollisionReport injectivity_probe(std::span<const UTPoint> points, double tol) {
    std::vector<FlagPoint> flags;
    flags.reserve(points.size());
    for (const auto& pt : points) flags.push_back(dev(pt));
    return find_collisions(points, flags, tol);
}

std::vector<UTPoint> halton_samples(std::size_t count, double max_radius) {
    std::vector<UTPoint> out;
    out.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        // sqrt keeps the samples roughly uniform in the disk of geodesic polar coordinates
        const double r = max_radius * std::sqrt(radical_inverse(i, 2));
        out.push_back(polar_sample(r, 2.0 * kPi * radical_inverse(i, 3), 2.0 * kPi * radical_inverse(i, 5)));
    }
    return out;
}

std::vector<UTPoint> grid_samples(int per_axis, double max_radius) {
    if (per_axis < 1) throw std::invalid_argument("grid_samples: need at least one sample per axis");
    std::vector<UTPoint> out;
    out.reserve(static_cast<std::size_t>(per_axis) * per_axis * per_axis);
    const double n = per_axis;
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            for (int k = 0; k < per_axis; ++k) {
                out.push_back(polar_sample(max_radius * (i + 0.5) / n, 2.0 * kPi * j / n, 2.0 * kPi * k / n));
            }
        }
    }
    return out;
}

}  // namespace phl

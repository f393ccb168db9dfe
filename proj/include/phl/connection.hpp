#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "phl/field.hpp"
#include "phl/solver.hpp"
#include "phl/torus.hpp"

namespace phl {

enum class Direction { x, y };

// Connection matrices at a point in the real orthonormal frame (b0, u1, v1, ..., um, vm).
// The para-complex connection is K + tau S: its plus part is K + S, its minus part K - S.
struct LocalConnection {
    int m = 1;
    Eigen::MatrixXd kx, ky;  // skew: the diagonal Omega_j blocks
    Eigen::MatrixXd sx, sy;  // symmetric: the off-diagonal Gamma blocks and the b0 row

    Eigen::Index dim() const { return 2 * m + 1; }
    const Eigen::MatrixXd& k(Direction d) const { return d == Direction::x ? kx : ky; }
    const Eigen::MatrixXd& s(Direction d) const { return d == Direction::x ? sx : sy; }
    // Plus part along the direction (vx, vy).
    Eigen::MatrixXd plus(double vx, double vy) const { return vx * (kx + sx) + vy * (ky + sy); }
    Eigen::MatrixXd minus(double vx, double vy) const { return vx * (kx - sx) + vy * (ky - sy); }

    // First index of the block L_k (k = 1..m) in the real frame.
    static Eigen::Index block_start(int k) { return 2 * k - 1; }
    // Gamma_k: block (k+1, k) for k < m, self block (m, m) for k = m.
    Eigen::Matrix2d gamma_block(int k, Direction d) const;
    // omega_k evaluated on the direction: the (1,0) entry of the Omega_k block.
    double omega(int k, Direction d) const;
};

// Deliberate defect for negative controls.
struct Corruption {
    bool flip_gamma1_y = false;  // negate entry (0,1) of Gamma_1 along d/dy
};

LocalConnection assemble_local(const FieldSample& sample, const Corruption& corruption = {});

class ConnectionField {
public:
    explicit ConnectionField(std::shared_ptr<const HiggsField> field, Corruption corruption = {});

    int m() const { return field_->m(); }
    LocalConnection at(double x, double y) const { return assemble_local(field_->sample(x, y), corruption_); }
    const HiggsField& field() const { return *field_; }
    std::shared_ptr<const HiggsField> field_ptr() const { return field_; }
    const Corruption& corruption() const { return corruption_; }

private:
    std::shared_ptr<const HiggsField> field_;
    Corruption corruption_;
};

// Connection sampled at every node of a torus solution.
struct ConnectionGrid {
    int n = 0;
    std::vector<LocalConnection> nodes;  // column-major (i, j)

    const LocalConnection& at(int i, int j) const { return nodes[static_cast<std::size_t>(flat_index(i, j, n))]; }
};

ConnectionGrid assemble_connection(const MetricSolution& sol, const HiggsData& data, const SpectralOps& ops);

// Max over blocks of the conformality defect of Gamma_k(cos t, sin t) for the given angles:
// columns orthogonal with equal norm.
double conformality_defect(const LocalConnection& conn, const std::vector<double>& angles);

}  // namespace phl

// SPDX-License-Identifier: Apache-2.0
//
// Euclidean Jordan algebra of products of nonnegative orthants and
// second-order cones, and Nesterov-Todd scaling on that product.
//
// A vector v in the SOC block [v0; v1] lies in the cone iff v0 >= ||v1||.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace cran::detail {

struct ConeBlock {
    bool second_order = false;
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
};

class ConeSet {
public:
    ConeSet() = default;
    explicit ConeSet(std::vector<ConeBlock> blocks);

    const std::vector<ConeBlock> &blocks() const { return blocks_; }
    Eigen::Index dim() const { return dim_; }
    /// Barrier degree: one per orthant coordinate plus one per SOC block.
    Eigen::Index degree() const { return degree_; }

    Eigen::VectorXd identity() const;
    bool interior(const Eigen::VectorXd &v) const;

    Eigen::VectorXd product(const Eigen::VectorXd &u, const Eigen::VectorXd &v) const;
    /// Solves lambda o u = v for u.
    Eigen::VectorXd divide(const Eigen::VectorXd &lambda, const Eigen::VectorXd &v) const;

    /// Largest alpha with v + alpha dv in the cone (v interior); infinity if unbounded.
    double max_step(const Eigen::VectorXd &v, const Eigen::VectorXd &dv) const;
    /// Smallest alpha with v + alpha e in the cone (negative if v is interior).
    double boundary_shift(const Eigen::VectorXd &v) const;
    /// Euclidean distance-like measure of how far v sits outside the cone (0 if inside).
    double violation(const Eigen::VectorXd &v) const;

private:
    std::vector<ConeBlock> blocks_;
    Eigen::Index dim_ = 0;
    Eigen::Index degree_ = 0;
};

/// Symmetric NT scaling W with W z = W^{-1} s = lambda.
class NtScaling {
public:
    NtScaling(const ConeSet &cones, const Eigen::VectorXd &s, const Eigen::VectorXd &z);

    const Eigen::VectorXd &lambda() const { return lambda_; }

    Eigen::VectorXd apply(const Eigen::VectorXd &v) const;
    Eigen::VectorXd apply_inverse(const Eigen::VectorXd &v) const;
    /// W^{-1} M, column by column.
    Eigen::MatrixXd apply_inverse(const Eigen::MatrixXd &m) const;
    /// Dense W^2 restricted to one cone block.
    Eigen::MatrixXd squared_block(std::size_t block) const;

private:
    struct SocFactor {
        double eta = 1.0;
        Eigen::VectorXd wbar;
    };

    template <bool Inverse> void apply_block(const ConeBlock &blk, std::size_t idx,
                                             const Eigen::Ref<const Eigen::VectorXd> &v,
                                             Eigen::Ref<Eigen::VectorXd> out) const;

    const ConeSet *cones_;
    Eigen::VectorXd orthant_w_;  // sqrt(s / z) on orthant coordinates, unused elsewhere
    std::vector<SocFactor> soc_;
    Eigen::VectorXd lambda_;
};

}  // namespace cran::detail

// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "cran/detail/cone_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cran::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double soc_det(const Eigen::Ref<const Eigen::VectorXd> &v)
{
    // factored form avoids cancellation near the boundary
    const double r = v.tail(v.size() - 1).norm();
    return (v(0) - r) * (v(0) + r);
}

/// Smallest positive root of a t^2 + 2 b t + c (c > 0 assumed), or infinity.
double first_positive_root(double a, double b, double c)
{
    if (std::abs(a) < 1e-300)
        return b < 0.0 ? -c / (2.0 * b) : kInf;
    const double disc = b * b - a * c;
    if (disc < 0.0)
        return kInf;
    const double sq = std::sqrt(disc);
    const double q = -(b + std::copysign(sq, b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : kInf;
    double best = kInf;
    if (r1 > 0.0)
        best = std::min(best, r1);
    if (r2 > 0.0)
        best = std::min(best, r2);
    return best;
}

}  // namespace

ConeSet::ConeSet(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks))
{
    for (const auto &b : blocks_)
    {
        dim_ = std::max(dim_, b.offset + b.size);
        degree_ += b.second_order ? 1 : b.size;
    }
}

Eigen::VectorXd ConeSet::identity() const
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
    for (const auto &b : blocks_)
    {
        if (b.second_order)
            e(b.offset) = 1.0;
        else
            e.segment(b.offset, b.size).setOnes();
    }
    return e;
}

bool ConeSet::interior(const Eigen::VectorXd &v) const
{
    for (const auto &b : blocks_)
    {
        auto seg = v.segment(b.offset, b.size);
        if (b.second_order)
        {
            if (!(seg(0) > 0.0) || !(soc_det(seg) > 0.0))
                return false;
        }
        else if (!(seg.minCoeff() > 0.0))
            return false;
    }
    return true;
}

Eigen::VectorXd ConeSet::product(const Eigen::VectorXd &u, const Eigen::VectorXd &v) const
{
    Eigen::VectorXd out(dim_);
    for (const auto &b : blocks_)
    {
        auto us = u.segment(b.offset, b.size);
        auto vs = v.segment(b.offset, b.size);
        auto os = out.segment(b.offset, b.size);
        if (b.second_order)
        {
            const Eigen::Index n = b.size - 1;
            os(0) = us.dot(vs);
            os.tail(n) = us(0) * vs.tail(n) + vs(0) * us.tail(n);
        }
        else
            os = us.cwiseProduct(vs);
    }
    return out;
}

Eigen::VectorXd ConeSet::divide(const Eigen::VectorXd &lambda, const Eigen::VectorXd &v) const
{
    Eigen::VectorXd out(dim_);
    for (const auto &b : blocks_)
    {
        auto ls = lambda.segment(b.offset, b.size);
        auto vs = v.segment(b.offset, b.size);
        auto os = out.segment(b.offset, b.size);
        if (b.second_order)
        {
            const Eigen::Index n = b.size - 1;
            const double det = soc_det(ls);
            const double u0 = (ls(0) * vs(0) - ls.tail(n).dot(vs.tail(n))) / det;
            os(0) = u0;
            os.tail(n) = (vs.tail(n) - u0 * ls.tail(n)) / ls(0);
        }
        else
            os = vs.cwiseQuotient(ls);
    }
    return out;
}

double ConeSet::max_step(const Eigen::VectorXd &v, const Eigen::VectorXd &dv) const
{
    double alpha = kInf;
    for (const auto &b : blocks_)
    {
        auto vs = v.segment(b.offset, b.size);
        auto ds = dv.segment(b.offset, b.size);
        if (b.second_order)
        {
            const Eigen::Index n = b.size - 1;
            const double a = ds(0) * ds(0) - ds.tail(n).squaredNorm();
            const double bq = vs(0) * ds(0) - vs.tail(n).dot(ds.tail(n));
            const double c = std::max(soc_det(vs), 0.0);
            double r = first_positive_root(a, bq, c);
            if (ds(0) < 0.0)
                r = std::min(r, -vs(0) / ds(0));
            alpha = std::min(alpha, r);
        }
        else
        {
            for (Eigen::Index i = 0; i < b.size; ++i)
                if (ds(i) < 0.0)
                    alpha = std::min(alpha, -vs(i) / ds(i));
        }
    }
    return alpha;
}

double ConeSet::boundary_shift(const Eigen::VectorXd &v) const
{
    double alpha = -kInf;
    for (const auto &b : blocks_)
    {
        auto vs = v.segment(b.offset, b.size);
        if (b.second_order)
            alpha = std::max(alpha, vs.tail(b.size - 1).norm() - vs(0));
        else
            alpha = std::max(alpha, -vs.minCoeff());
    }
    return alpha;
}

double ConeSet::violation(const Eigen::VectorXd &v) const
{
    double worst = 0.0;
    for (const auto &b : blocks_)
    {
        auto vs = v.segment(b.offset, b.size);
        if (b.second_order)
            worst = std::max(worst, vs.tail(b.size - 1).norm() - vs(0));
        else
            worst = std::max(worst, -vs.minCoeff());
    }
    return worst;
}

NtScaling::NtScaling(const ConeSet &cones, const Eigen::VectorXd &s, const Eigen::VectorXd &z)
    : cones_(&cones), orthant_w_(Eigen::VectorXd::Zero(cones.dim()))
{
    for (const auto &b : cones.blocks())
    {
        auto ss = s.segment(b.offset, b.size);
        auto zs = z.segment(b.offset, b.size);
        if (!b.second_order)
        {
            orthant_w_.segment(b.offset, b.size) = ss.cwiseQuotient(zs).cwiseSqrt();
            soc_.emplace_back();
            continue;
        }
        const Eigen::Index n = b.size - 1;
        const double sdet = std::sqrt(soc_det(ss));
        const double zdet = std::sqrt(soc_det(zs));
        const Eigen::VectorXd sbar = ss / sdet;
        const Eigen::VectorXd zbar = zs / zdet;
        const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
        SocFactor f;
        f.eta = std::sqrt(sdet / zdet);
        f.wbar.resize(b.size);
        f.wbar(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
        f.wbar.tail(n) = (sbar.tail(n) - zbar.tail(n)) / (2.0 * gamma);
        soc_.push_back(std::move(f));
    }
    lambda_ = apply(z);
}

template <bool Inverse>
void NtScaling::apply_block(const ConeBlock &blk, std::size_t idx, const Eigen::Ref<const Eigen::VectorXd> &v,
                            Eigen::Ref<Eigen::VectorXd> out) const
{
    if (!blk.second_order)
    {
        const auto w = orthant_w_.segment(blk.offset, blk.size);
        if constexpr (Inverse)
            out = v.cwiseQuotient(w);
        else
            out = v.cwiseProduct(w);
        return;
    }
    const auto &f = soc_[idx];
    const Eigen::Index n = blk.size - 1;
    const double w0 = f.wbar(0);
    const auto w1 = f.wbar.tail(n);
    const double sign = Inverse ? -1.0 : 1.0;
    const double scale = Inverse ? 1.0 / f.eta : f.eta;
    const double w1v1 = w1.dot(v.tail(n));
    const double head = w0 * v(0) + sign * w1v1;
    out.tail(n) = scale * (v.tail(n) + (sign * v(0) + w1v1 / (1.0 + w0)) * w1);
    out(0) = scale * head;
}

Eigen::VectorXd NtScaling::apply(const Eigen::VectorXd &v) const
{
    Eigen::VectorXd out(v.size());
    const auto &blocks = cones_->blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i)
        apply_block<false>(blocks[i], i, v.segment(blocks[i].offset, blocks[i].size),
                           out.segment(blocks[i].offset, blocks[i].size));
    return out;
}

Eigen::VectorXd NtScaling::apply_inverse(const Eigen::VectorXd &v) const
{
    Eigen::VectorXd out(v.size());
    const auto &blocks = cones_->blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i)
        apply_block<true>(blocks[i], i, v.segment(blocks[i].offset, blocks[i].size),
                          out.segment(blocks[i].offset, blocks[i].size));
    return out;
}

Eigen::MatrixXd NtScaling::apply_inverse(const Eigen::MatrixXd &m) const
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        out.col(j) = apply_inverse(Eigen::VectorXd(m.col(j)));
    return out;
}

Eigen::MatrixXd NtScaling::squared_block(std::size_t block) const
{
    const auto &blk = cones_->blocks()[block];
    if (!blk.second_order)
        return orthant_w_.segment(blk.offset, blk.size).array().square().matrix().asDiagonal();
    // eta^2 (2 wbar wbar' - J)
    const auto &f = soc_[block];
    Eigen::MatrixXd m = 2.0 * f.wbar * f.wbar.transpose();
    m.diagonal().array() += 1.0;
    m(0, 0) -= 2.0;
    return f.eta * f.eta * m;
}

}  // namespace cran::detail

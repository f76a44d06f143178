// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "cran/conic.hpp"

#include "cran/detail/cone_algebra.hpp"

#include <Eigen/LU>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cran {

void ConicProblem::validate() const
{
    if (A.rows() != b.size() || A.cols() != c.size())
        throw std::invalid_argument("conic problem: A must be rows(b) x size(c)");
    Eigen::Index total = 0;
    for (const auto &k : cones)
    {
        if (k.size < 1)
            throw std::invalid_argument("conic problem: cones must be nonempty");
        if (k.kind == ConeKind::kSecondOrder && k.size < 1)
            throw std::invalid_argument("conic problem: SOC needs a head entry");
        total += k.size;
    }
    if (total != b.size())
        throw std::invalid_argument("conic problem: cone sizes must sum to the row count");
    if (!c.allFinite() || !b.allFinite())
        throw std::invalid_argument("conic problem: non-finite data");
}

std::string to_string(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

void SolverSettings::validate() const
{
    if (!(feasibility_tol > 0.0) || !(optimality_tol > 0.0))
        throw std::invalid_argument("solver tolerances must be positive");
    if (max_iterations < 1)
        throw std::invalid_argument("solver needs at least one iteration");
}

double constraint_violation(const ConicProblem &problem, const Eigen::VectorXd &x)
{
    const Eigen::VectorXd s = problem.b - problem.A * x;
    double worst = 0.0;
    Eigen::Index off = 0;
    for (const auto &k : problem.cones)
    {
        auto seg = s.segment(off, k.size);
        switch (k.kind)
        {
        case ConeKind::kZero: worst = std::max(worst, seg.cwiseAbs().maxCoeff()); break;
        case ConeKind::kNonnegative: worst = std::max(worst, -seg.minCoeff()); break;
        case ConeKind::kSecondOrder: worst = std::max(worst, seg.tail(k.size - 1).norm() - seg(0)); break;
        }
        off += k.size;
    }
    return worst;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Problem after presolve: equalities A x = b, cone rows G x + s = h, s in K.
struct Reduced {
    MatrixXd A;
    VectorXd b;
    MatrixXd G;
    VectorXd h;
    VectorXd c;
    detail::ConeSet cones;
    std::vector<Index> eq_rows;    // original row of each equality
    std::vector<Index> cone_rows;  // original row of each cone row
    std::vector<Index> cols;       // original column of each kept variable
    // equilibration: reduced data = diag(row) * original * diag(col)
    VectorXd col_scale;
    VectorXd eq_scale;
    VectorXd cone_scale;
};

enum class Presolve { kReady, kInfeasible, kUnbounded, kTrivial };

/// Ruiz equilibration of [A; G]; SOC rows share one factor per block.
void equilibrate(Reduced &r)
{
    const Index n = r.c.size(), p = r.A.rows(), m = r.G.rows();
    r.col_scale = VectorXd::Ones(n);
    r.eq_scale = VectorXd::Ones(p);
    r.cone_scale = VectorXd::Ones(m);
    auto clamp = [](double v) { return v < 1e-4 ? 1.0 : std::min(v, 1e4); };
    for (int pass = 0; pass < 15; ++pass)
    {
        VectorXd cmax = VectorXd::Zero(n);
        if (p > 0)
            cmax = cmax.cwiseMax(r.A.cwiseAbs().colwise().maxCoeff().transpose());
        if (m > 0)
            cmax = cmax.cwiseMax(r.G.cwiseAbs().colwise().maxCoeff().transpose());
        VectorXd dc(n);
        for (Index j = 0; j < n; ++j)
            dc(j) = 1.0 / std::sqrt(clamp(cmax(j)));

        VectorXd de(p), dg(m);
        for (Index i = 0; i < p; ++i)
            de(i) = 1.0 / std::sqrt(clamp(r.A.row(i).cwiseAbs().maxCoeff()));
        for (Index i = 0; i < m; ++i)
            dg(i) = r.G.row(i).cwiseAbs().maxCoeff();
        for (const auto &b : r.cones.blocks())
        {
            if (b.second_order)
                dg.segment(b.offset, b.size).setConstant(dg.segment(b.offset, b.size).maxCoeff());
        }
        for (Index i = 0; i < m; ++i)
            dg(i) = 1.0 / std::sqrt(clamp(dg(i)));

        r.A = de.asDiagonal() * r.A * dc.asDiagonal();
        r.G = dg.asDiagonal() * r.G * dc.asDiagonal();
        r.col_scale.array() *= dc.array();
        r.eq_scale.array() *= de.array();
        r.cone_scale.array() *= dg.array();
    }
    r.b.array() *= r.eq_scale.array();
    r.h.array() *= r.cone_scale.array();
    r.c.array() *= r.col_scale.array();
}

Presolve presolve(const ConicProblem &p, double tol, Reduced &r, Index &certificate_row)
{
    const MatrixXd dense = MatrixXd(p.A);
    const double bscale = std::max(1.0, p.b.cwiseAbs().maxCoeff());
    auto row_empty = [&](Index i) { return dense.cols() == 0 || dense.row(i).cwiseAbs().maxCoeff() == 0.0; };

    std::vector<Index> eq, ineq;
    std::vector<detail::ConeBlock> blocks;
    Index off = 0;
    for (const auto &k : p.cones)
    {
        if (k.kind == ConeKind::kZero)
        {
            for (Index i = off; i < off + k.size; ++i)
            {
                if (!row_empty(i))
                    eq.push_back(i);
                else if (std::abs(p.b(i)) > tol * bscale)
                {
                    certificate_row = i;
                    return Presolve::kInfeasible;
                }
            }
        }
        else if (k.kind == ConeKind::kNonnegative)
        {
            detail::ConeBlock blk{false, static_cast<Index>(ineq.size()), 0};
            for (Index i = off; i < off + k.size; ++i)
            {
                if (!row_empty(i))
                {
                    ineq.push_back(i);
                    ++blk.size;
                }
                else if (p.b(i) < -tol * bscale)
                {
                    certificate_row = i;
                    return Presolve::kInfeasible;
                }
            }
            if (blk.size > 0)
                blocks.push_back(blk);
        }
        else
        {
            bool constant = true;
            for (Index i = off; i < off + k.size && constant; ++i)
                constant = row_empty(i);
            if (constant)
            {
                auto seg = p.b.segment(off, k.size);
                if (seg.tail(k.size - 1).norm() - seg(0) > tol * bscale)
                {
                    certificate_row = off;
                    return Presolve::kInfeasible;
                }
            }
            else
            {
                blocks.push_back({true, static_cast<Index>(ineq.size()), k.size});
                for (Index i = off; i < off + k.size; ++i)
                    ineq.push_back(i);
            }
        }
        off += k.size;
    }

    // Columns touched by no remaining row are free; they must have zero cost.
    std::vector<Index> cols;
    for (Index j = 0; j < p.c.size(); ++j)
    {
        bool used = false;
        for (Index i : eq)
            used = used || dense(i, j) != 0.0;
        for (Index i : ineq)
            used = used || dense(i, j) != 0.0;
        if (used)
            cols.push_back(j);
        else if (p.c(j) != 0.0)
            return Presolve::kUnbounded;
    }

    r.eq_rows = eq;
    r.cone_rows = ineq;
    r.cols = cols;
    r.cones = detail::ConeSet(blocks);
    const Index n = static_cast<Index>(cols.size());
    r.A.resize(static_cast<Index>(eq.size()), n);
    r.b.resize(static_cast<Index>(eq.size()));
    r.G.resize(static_cast<Index>(ineq.size()), n);
    r.h.resize(static_cast<Index>(ineq.size()));
    r.c.resize(n);
    for (Index j = 0; j < n; ++j)
    {
        r.c(j) = p.c(cols[j]);
        for (std::size_t i = 0; i < eq.size(); ++i)
            r.A(static_cast<Index>(i), j) = dense(eq[i], cols[j]);
        for (std::size_t i = 0; i < ineq.size(); ++i)
            r.G(static_cast<Index>(i), j) = dense(ineq[i], cols[j]);
    }
    for (std::size_t i = 0; i < eq.size(); ++i)
        r.b(static_cast<Index>(i)) = p.b(eq[i]);
    for (std::size_t i = 0; i < ineq.size(); ++i)
        r.h(static_cast<Index>(i)) = p.b(ineq[i]);

    if (n == 0)
        return Presolve::kTrivial;
    equilibrate(r);
    return Presolve::kReady;
}

/// Quasidefinite factorization of
///
///     [ 0  A'  G'   ]
///     [ A  0   0    ]
///     [ G  0  -W^2  ]
///
/// Sparse LDL' with static regularization (+delta on the x block, -delta
/// elsewhere) and iterative refinement against the unregularized matrix.
/// Near convergence a single SOC block of W^2 can span many orders of
/// magnitude; when refinement stalls, the step falls back to a dense LU with
/// partial pivoting for the rest of the iteration.
class KktSystem {
public:
    explicit KktSystem(const Reduced &r) : r_(r)
    {
        n_ = r.c.size();
        p_ = r.A.rows();
        m_ = r.G.rows();
        for (Index j = 0; j < n_; ++j)
        {
            for (Index i = 0; i < p_; ++i)
                if (r.A(i, j) != 0.0)
                    fixed_.emplace_back(n_ + i, j, r.A(i, j));
            for (Index i = 0; i < m_; ++i)
                if (r.G(i, j) != 0.0)
                    fixed_.emplace_back(n_ + p_ + i, j, r.G(i, j));
        }
        for (const auto &t : fixed_)
            scale_ = std::max(scale_, std::abs(t.value()));
        const Index dim = n_ + p_ + m_;
        sign_ = VectorXd::Constant(dim, -1.0);
        sign_.head(n_).setOnes();
    }

    bool factor(const detail::NtScaling &w)
    {
        std::vector<Eigen::Triplet<double>> trip = fixed_;
        const auto &blocks = r_.cones.blocks();
        for (std::size_t b = 0; b < blocks.size(); ++b)
        {
            const MatrixXd w2 = w.squared_block(b);
            const Index off = n_ + p_ + blocks[b].offset;
            for (Index j = 0; j < w2.cols(); ++j)
                for (Index i = j; i < w2.rows(); ++i)
                    trip.emplace_back(off + i, off + j, -w2(i, j));
        }
        const Index dim = n_ + p_ + m_;
        for (Index i = 0; i < dim; ++i)
            trip.emplace_back(i, i, 0.0);
        kkt_.resize(dim, dim);
        kkt_.setFromTriplets(trip.begin(), trip.end());
        dense_ready_ = false;

        for (double reg = 1e-10 * scale_; reg < 1e-2 * scale_; reg *= 100.0)
        {
            SpMat k = kkt_;
            for (Index i = 0; i < dim; ++i)
                k.coeffRef(i, i) += sign_(i) * reg;
            if (!analyzed_)
            {
                ldlt_.analyzePattern(k);
                analyzed_ = true;
            }
            ldlt_.factorize(k);
            if (ldlt_.info() == Eigen::Success && ldlt_.vectorD().allFinite())
                return true;
        }
        return factor_dense();
    }

    void solve(const VectorXd &r1, const VectorXd &r2, const VectorXd &r3, VectorXd &dx, VectorXd &dy,
               VectorXd &dz)
    {
        const Index dim = n_ + p_ + m_;
        VectorXd rhs(dim);
        rhs << r1, r2, r3;
        const double target = 1e-10 * (1.0 + rhs.lpNorm<Eigen::Infinity>());

        VectorXd sol;
        if (!dense_ready_)
        {
            sol = ldlt_.solve(rhs);
            const double err = refine([&](const VectorXd &e) { return VectorXd(ldlt_.solve(e)); }, rhs, sol);
            if (!(err <= target))
                factor_dense();
        }
        if (dense_ready_)
        {
            sol = lu_.solve(rhs);
            refine([&](const VectorXd &e) { return VectorXd(lu_.solve(e)); }, rhs, sol);
        }
        dx = sol.head(n_);
        dy = sol.segment(n_, p_);
        dz = sol.tail(m_);
    }

private:
    using SpMat = Eigen::SparseMatrix<double>;

    bool factor_dense()
    {
        const MatrixXd lower = MatrixXd(kkt_);
        MatrixXd full = lower.selfadjointView<Eigen::Lower>();
        lu_.compute(full);
        dense_ready_ = true;
        return true;
    }

    template <class Solver> double refine(Solver &&apply, const VectorXd &rhs, VectorXd &sol) const
    {
        const double floor = 1e-15 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
        VectorXd e = rhs - multiply(sol);
        double err = e.lpNorm<Eigen::Infinity>();
        for (int it = 0; it < 10 && err > floor; ++it)
        {
            const VectorXd trial = sol + apply(e);
            const VectorXd e2 = rhs - multiply(trial);
            const double err2 = e2.lpNorm<Eigen::Infinity>();
            if (!(err2 < 0.5 * err))
            {
                if (err2 < err)
                {
                    sol = trial;
                    err = err2;
                }
                break;
            }
            sol = trial;
            e = e2;
            err = err2;
        }
        return err;
    }

    /// Unregularized product; only the lower triangle is stored.
    VectorXd multiply(const VectorXd &v) const { return kkt_.selfadjointView<Eigen::Lower>() * v; }

    const Reduced &r_;
    Index n_ = 0, p_ = 0, m_ = 0;
    double scale_ = 1.0;
    std::vector<Eigen::Triplet<double>> fixed_;
    VectorXd sign_;
    SpMat kkt_;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    bool analyzed_ = false;
    Eigen::PartialPivLU<MatrixXd> lu_;
    bool dense_ready_ = false;
};

struct Iterate {
    VectorXd x, y, z, s;
    double tau = 1.0;
    double kappa = 1.0;
};

struct Direction {
    VectorXd dx, dy, dz, ds;
    double dtau = 0.0;
    double dkappa = 0.0;
};

double safe_norm(const VectorXd &v)
{
    return v.size() ? v.norm() : 0.0;
}

class HsdSolver {
public:
    HsdSolver(const Reduced &r, const SolverSettings &settings) : r_(r), settings_(settings), kkt_(r) {}

    SolveStatus run(Iterate &it, int &iterations)
    {
        const Index m = r_.G.rows();
        const detail::ConeSet &K = r_.cones;
        const double bnorm = std::max(1.0, safe_norm(r_.b));
        const double hnorm = std::max(1.0, safe_norm(r_.h));
        const double cnorm = std::max(1.0, safe_norm(r_.c));
        const VectorXd e = K.identity();

        if (!initialize(it))
            return SolveStatus::kNumericalFailure;

        for (iterations = 0; iterations <= settings_.max_iterations; ++iterations)
        {
            const VectorXd rx = r_.A.transpose() * it.y + r_.G.transpose() * it.z + r_.c * it.tau;
            const VectorXd ry = r_.A * it.x - r_.b * it.tau;
            const VectorXd rz = r_.G * it.x + it.s - r_.h * it.tau;
            const double cx = r_.c.dot(it.x);
            const double by_hz = r_.b.dot(it.y) + r_.h.dot(it.z);
            const double rtau = cx + by_hz + it.kappa;
            const double sz = it.s.dot(it.z);
            const double mu = (sz + it.tau * it.kappa) / static_cast<double>(K.degree() + 1);

            if (!rx.allFinite() || !std::isfinite(mu))
                return SolveStatus::kNumericalFailure;

            const double pres = std::max(safe_norm(ry) / bnorm, safe_norm(rz) / hnorm) / it.tau;
            const double dres = safe_norm(rx) / cnorm / it.tau;
            const double pcost = cx / it.tau;
            const double gap = sz / (it.tau * it.tau);
            if (pres < settings_.feasibility_tol && dres < settings_.feasibility_tol &&
                gap < settings_.optimality_tol * std::max(1.0, std::abs(pcost)))
                return SolveStatus::kOptimal;

            if (by_hz < 0.0)
            {
                const VectorXd farkas = (r_.A.transpose() * it.y + r_.G.transpose() * it.z) / -by_hz;
                if (farkas.norm() < settings_.feasibility_tol * cnorm)
                    return SolveStatus::kInfeasible;
            }
            if (cx < 0.0)
            {
                const double ax = safe_norm(VectorXd(r_.A * it.x)) / -cx;
                const double gx = safe_norm(VectorXd(r_.G * it.x + it.s)) / -cx;
                if (std::max(ax, gx) < settings_.feasibility_tol)
                    return SolveStatus::kUnbounded;
            }
            if (iterations == settings_.max_iterations)
                break;

            const detail::NtScaling w(K, it.s, it.z);
            if (!kkt_.factor(w))
                return SolveStatus::kNumericalFailure;

            // Direction for the homogenizing column [-c; b; h].
            VectorXd x1, y1, z1;
            kkt_.solve(-r_.c, r_.b, r_.h, x1, y1, z1);
            const double denom = r_.c.dot(x1) + r_.b.dot(y1) + r_.h.dot(z1) - it.kappa / it.tau;

            const VectorXd &lambda = w.lambda();
            auto direction = [&](double sigma, const VectorXd &ds_target, double dk_target) {
                const double keep = 1.0 - sigma;
                const VectorXd ldiv = K.divide(lambda, ds_target);
                VectorXd x2, y2, z2;
                kkt_.solve(-keep * rx, -keep * ry, VectorXd(-keep * rz - w.apply(ldiv)), x2, y2, z2);
                Direction d;
                d.dtau = (-keep * rtau - dk_target / it.tau - (r_.c.dot(x2) + r_.b.dot(y2) + r_.h.dot(z2))) / denom;
                d.dx = x2 + d.dtau * x1;
                d.dy = y2 + d.dtau * y1;
                d.dz = z2 + d.dtau * z1;
                d.ds = w.apply(VectorXd(ldiv - w.apply(d.dz)));
                d.dkappa = (dk_target - it.kappa * d.dtau) / it.tau;
                return d;
            };

            const Direction aff = direction(0.0, VectorXd(-K.product(lambda, lambda)), -it.tau * it.kappa);
            const double alpha_aff = std::min(1.0, step_length(it, aff, w));
            const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

            const VectorXd corr = K.product(w.apply_inverse(aff.ds), w.apply(aff.dz));
            const VectorXd target = -K.product(lambda, lambda) - corr + sigma * mu * e;
            const double ktarget = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
            const Direction d = direction(sigma, target, ktarget);

            const double alpha = std::min(1.0, 0.99 * step_length(it, d, w));
            if (!(alpha > 1e-12))
                return SolveStatus::kNumericalFailure;

            it.x += alpha * d.dx;
            it.y += alpha * d.dy;
            it.z += alpha * d.dz;
            it.s += alpha * d.ds;
            it.tau += alpha * d.dtau;
            it.kappa += alpha * d.dkappa;

            if (m > 0 && (!K.interior(it.s) || !K.interior(it.z)))
                return SolveStatus::kNumericalFailure;
        }
        return SolveStatus::kNumericalFailure;
    }

private:
    /// Cone step limits are taken in the scaled space around lambda, where the
    /// iterate is well centred: s + a ds in K iff lambda + a W^{-1} ds in K.
    double step_length(const Iterate &it, const Direction &d, const detail::NtScaling &w) const
    {
        double alpha = std::numeric_limits<double>::infinity();
        if (r_.G.rows() > 0)
        {
            alpha = std::min(alpha, r_.cones.max_step(w.lambda(), w.apply_inverse(d.ds)));
            alpha = std::min(alpha, r_.cones.max_step(w.lambda(), w.apply(d.dz)));
        }
        if (d.dtau < 0.0)
            alpha = std::min(alpha, -it.tau / d.dtau);
        if (d.dkappa < 0.0)
            alpha = std::min(alpha, -it.kappa / d.dkappa);
        return alpha;
    }

    bool initialize(Iterate &it)
    {
        const Index n = r_.c.size();
        const Index p = r_.A.rows();
        const Index m = r_.G.rows();
        const detail::ConeSet &K = r_.cones;

        // W = I for the starting point.
        const VectorXd e = K.identity();
        const detail::NtScaling unit(K, e, e);
        if (!kkt_.factor(unit))
            return false;

        VectorXd x, y, z;
        kkt_.solve(VectorXd::Zero(n), r_.b, r_.h, x, y, z);
        it.x = x;
        it.s = -z;
        const double ap = K.boundary_shift(it.s);
        if (m > 0 && ap >= 0.0)
            it.s += (1.0 + ap) * e;

        kkt_.solve(-r_.c, VectorXd::Zero(p), VectorXd::Zero(m), x, y, z);
        it.y = y;
        it.z = z;
        const double ad = K.boundary_shift(it.z);
        if (m > 0 && ad >= 0.0)
            it.z += (1.0 + ad) * e;
        it.tau = 1.0;
        it.kappa = 1.0;
        return it.x.allFinite() && it.y.allFinite() && it.z.allFinite() && it.s.allFinite();
    }

    const Reduced &r_;
    const SolverSettings &settings_;
    KktSystem kkt_;
};

}  // namespace

ConicSolution InteriorPointBackend::solve(const ConicProblem &problem, const SolverSettings &settings) const
{
    problem.validate();
    settings.validate();

    ConicSolution out;
    out.primal = VectorXd::Zero(problem.num_variables());
    out.dual = VectorXd::Zero(problem.num_rows());

    Reduced r;
    Index cert_row = -1;
    const Presolve pre = presolve(problem, settings.feasibility_tol, r, cert_row);
    if (pre == Presolve::kInfeasible)
    {
        out.status = SolveStatus::kInfeasible;
        if (cert_row >= 0)
            out.dual(cert_row) = 1.0;
        out.max_constraint_violation = constraint_violation(problem, out.primal);
        return out;
    }
    if (pre == Presolve::kUnbounded)
    {
        out.status = SolveStatus::kUnbounded;
        return out;
    }
    if (pre == Presolve::kTrivial)
    {
        out.status = SolveStatus::kOptimal;
        out.max_constraint_violation = constraint_violation(problem, out.primal);
        return out;
    }

    Iterate it;
    HsdSolver solver(r, settings);
    out.status = solver.run(it, out.iterations);

    const double scale = out.status == SolveStatus::kOptimal ? it.tau : 1.0;
    const bool have_iterate = it.x.size() == static_cast<Index>(r.cols.size()) &&
                              it.y.size() == static_cast<Index>(r.eq_rows.size()) &&
                              it.z.size() == static_cast<Index>(r.cone_rows.size());
    for (std::size_t j = 0; have_iterate && j < r.cols.size(); ++j)
        out.primal(r.cols[j]) = r.col_scale(static_cast<Index>(j)) * it.x(static_cast<Index>(j)) / scale;
    for (std::size_t i = 0; have_iterate && i < r.eq_rows.size(); ++i)
        out.dual(r.eq_rows[i]) = r.eq_scale(static_cast<Index>(i)) * it.y(static_cast<Index>(i)) / scale;
    for (std::size_t i = 0; have_iterate && i < r.cone_rows.size(); ++i)
        out.dual(r.cone_rows[i]) = r.cone_scale(static_cast<Index>(i)) * it.z(static_cast<Index>(i)) / scale;

    if (out.status != SolveStatus::kOptimal)
    {
        if (out.status != SolveStatus::kNumericalFailure)
            out.primal.setZero();
        out.max_constraint_violation = constraint_violation(problem, out.primal);
        return out;
    }
    out.objective = problem.c.dot(out.primal);
    out.max_constraint_violation = constraint_violation(problem, out.primal);
    return out;
}

const ConicBackend &default_backend()
{
    static const InteriorPointBackend backend;
    return backend;
}

ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings)
{
    return default_backend().solve(problem, settings);
}

void write_problem_text(const ConicProblem &problem, std::ostream &os)
{
    const auto old = os.precision(17);
    os << "%%ConicProblem minimize c'x subject to b - A x in K\n";
    os << "%%cones";
    for (const auto &k : problem.cones)
    {
        const char *tag = k.kind == ConeKind::kZero ? "z" : k.kind == ConeKind::kNonnegative ? "l" : "q";
        os << ' ' << tag << ':' << k.size;
    }
    os << '\n';
    os << problem.num_rows() << ' ' << problem.num_variables() << ' ' << problem.A.nonZeros() << '\n';
    for (Index j = 0; j < problem.A.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator itr(problem.A, j); itr; ++itr)
            os << itr.row() + 1 << ' ' << itr.col() + 1 << ' ' << itr.value() << '\n';
    os << "%%b\n";
    for (Index i = 0; i < problem.b.size(); ++i)
        os << problem.b(i) << '\n';
    os << "%%c\n";
    for (Index j = 0; j < problem.c.size(); ++j)
        os << problem.c(j) << '\n';
    os.precision(old);
}

}  // namespace cran

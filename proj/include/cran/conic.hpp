// SPDX-License-Identifier: Apache-2.0
//
// Real second-order cone programs in the form
//
//     minimize    c'x
//     subject to  b - A x  in  K = K_1 x K_2 x ... (in row order)
//
// where each K_i is a zero cone, a nonnegative orthant or a second-order cone.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace cran {

enum class ConeKind { kZero, kNonnegative, kSecondOrder };

struct Cone {
    ConeKind kind;
    Eigen::Index size;
    bool operator==(const Cone &) const = default;
};

struct ConicProblem {
    Eigen::VectorXd c;
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    std::vector<Cone> cones;

    Eigen::Index num_variables() const { return c.size(); }
    Eigen::Index num_rows() const { return b.size(); }

    /// Throws std::invalid_argument if sizes are inconsistent.
    void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string to_string(SolveStatus status);

struct SolverSettings {
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-8;
    int max_iterations = 200;

    void validate() const;
};

struct ConicSolution {
    Eigen::VectorXd primal;
    Eigen::VectorXd dual;  // one multiplier per row (for infeasible problems, the certificate)
    double objective = 0.0;
    SolveStatus status = SolveStatus::kNumericalFailure;
    double max_constraint_violation = 0.0;
    int iterations = 0;
};

/// Largest amount by which b - A x leaves its cone, over all cones.
double constraint_violation(const ConicProblem &problem, const Eigen::VectorXd &x);

class ConicBackend {
public:
    virtual ~ConicBackend() = default;
    virtual ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings) const = 0;
    virtual std::string name() const = 0;
};

/// Homogeneous self-dual primal-dual interior-point method with Nesterov-Todd
/// scaling and Mehrotra predictor-corrector steps. Dense linear algebra; meant
/// for problems with up to a few hundred variables.
class InteriorPointBackend final : public ConicBackend {
public:
    ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings) const override;
    std::string name() const override { return "hsd-ipm"; }
};

const ConicBackend &default_backend();

ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings = {});

/// Plain-text coordinate dump (matrix-market style) for cross-checking with external solvers.
void write_problem_text(const ConicProblem &problem, std::ostream &os);

}  // namespace cran

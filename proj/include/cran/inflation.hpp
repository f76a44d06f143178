// SPDX-License-Identifier: Apache-2.0
//
// Greedy inflation over RRH-MU pairs: start from an empty network, switch on
// one pair per step in priority order and keep it only while the fixed
// problem's objective does not go up.
// ------------------------------------------------------------------------

#pragma once

#include "cran/socp_form.hpp"

#include <iosfwd>
#include <vector>

namespace cran {

/// Added to the leakage sum of every priority level (noise-normalized units).
inline constexpr double kPriorityEpsilon = 1e-12;

/// alpha_lk = |g_lk^H w_lk|^2 / (sum_{i != k} |g_li^H w_lk|^2 + eps) * C_l / sum_j C_j
/// with g_li = h_li / sigma_i. Throws std::invalid_argument when sum_j C_j = 0.
Eigen::MatrixXd priority_levels(const BeamformingSolution &relaxed, const ChannelRealization &channels,
                                const NetworkConfig &config, double epsilon = kPriorityEpsilon);

/// What to do after a step raised the objective and was undone.
enum class ReversionPolicy {
    kStop,      // end the search there
    kContinue,  // keep drawing pairs until none remain
};

struct InflationOptions {
    ReversionPolicy reversion = ReversionPolicy::kStop;
    double epsilon = kPriorityEpsilon;
};

struct InflationStep {
    int n = 0;
    int l_star = -1;
    int k_star = -1;
    double objective = 0.0;  // F-hat recorded for this step
    double attempted = 0.0;  // objective of the solve itself, before any reversion
    bool feasible = false;
    bool reverted = false;
    bool numerical_failure = false;
    std::size_t remaining = 0;  // |U| after the step
};

struct InflationTrace {
    double initial_objective = 0.0;
    SolveStatus relaxed_status = SolveStatus::kNumericalFailure;
    std::vector<InflationStep> steps;
    int socp_solves = 0;
    int numerical_failures = 0;

    void write_csv(std::ostream &os) const;
};

struct InflationResult {
    NetworkState state;
    BeamformingSolution beams;
    InflationTrace trace;
    bool feasible = false;
    double objective_ref = 0.0;  // F-hat
    double power = 0.0;          // F

    int socp_solves() const { return trace.socp_solves; }
};

InflationResult inflate(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                        const SolverSettings &settings, const InflationOptions &options = {},
                        const ConicBackend &backend = default_backend());

}  // namespace cran

// SPDX-License-Identifier: Apache-2.0
//
// Real-valued conic encodings of the joint association / beamforming problem.
//
// Complex beamformers are split into real and imaginary columns. Every
// QoS-related row is divided by the user's noise amplitude sigma_k so that the
// conic data is O(1) regardless of absolute path loss.
//
// Cone order in both builders:
//   epigraph SOC per RRH   ||(2 w_l, t_l - 1)|| <= t_l + 1
//   QoS SOC per user       ||(interference, sigma_k)|| <= Re{sum_l h_lk^H w_lk} / sqrt(gamma_k)
//   zero cone per user     Im{sum_l h_lk^H w_lk} = 0
//   power SOC per RRH      ||w_l|| <= sqrt(a_l P_l^MAX)
// and, in the relaxation only,
//   coupling SOC per pair  ||w_lk|| <= b_lk sqrt(P_l^MAX)
//   fronthaul rows         a_l C_l - sum_k b_lk >= 0
//   box rows               0 <= a_l, b_lk <= 1
// ------------------------------------------------------------------------

#pragma once

#include "cran/conic.hpp"
#include "cran/netmodel.hpp"

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cran {

enum class VariableKind { kBeamReal, kBeamImag, kEpigraph, kActivity, kAssociation };

struct VariableKey {
    VariableKind kind;
    int rrh = -1;
    int user = -1;
    int antenna = -1;

    auto operator<=>(const VariableKey &) const = default;
};

class VariableLayout {
public:
    Eigen::Index add(const VariableKey &key);
    std::optional<Eigen::Index> find(const VariableKey &key) const;
    Eigen::Index column(const VariableKey &key) const;
    const VariableKey &key(Eigen::Index column) const { return keys_.at(static_cast<std::size_t>(column)); }
    Eigen::Index size() const { return static_cast<Eigen::Index>(keys_.size()); }

    /// Column j moves to permutation[j].
    VariableLayout permuted(const std::vector<Eigen::Index> &permutation) const;

private:
    std::vector<VariableKey> keys_;
    std::map<VariableKey, Eigen::Index> index_;
};

struct SocpInstance {
    ConicProblem problem;
    VariableLayout layout;
    /// Affine objective part kept outside the cone program (sum a_l P^CMS_l + zeta term).
    double objective_constant = 0.0;
    /// Some user has no serving pair, so its QoS cone is a violated constant.
    bool trivially_infeasible = false;
};

/// Fixed-association problem for a given network state.
SocpInstance build_fixed_problem(const NetworkState &state, const ChannelRealization &channels,
                                 const PowerParams &params, const NetworkConfig &config,
                                 const ValidationOptions &options = {});

/// Continuous relaxation with a_l, b_lk in [0, 1].
SocpInstance build_relaxed_problem(const ChannelRealization &channels, const PowerParams &params,
                                   const NetworkConfig &config);

/// Reorders columns; the returned instance describes the same program.
SocpInstance permute_columns(const SocpInstance &instance, const std::vector<Eigen::Index> &permutation);

class SolveError : public std::runtime_error {
public:
    explicit SolveError(SolveStatus status);
    SolveStatus status() const noexcept { return status_; }

private:
    SolveStatus status_;
};

/// Reassembles w_lk from the real columns and evaluates the achieved SINRs.
/// objective_value is the conic objective plus the instance constant.
BeamformingSolution extract_beamformers(const ConicSolution &solution, const SocpInstance &instance,
                                        const NetworkState &state, const ChannelRealization &channels);

struct RelaxedFlags {
    Eigen::VectorXd a;
    Eigen::MatrixXd b;
};

RelaxedFlags extract_relaxed_flags(const ConicSolution &solution, const VariableLayout &layout,
                                   std::size_t num_rrhs, std::size_t num_users);

struct FixedSolve {
    SolveStatus status = SolveStatus::kNumericalFailure;
    BeamformingSolution beams;
    double objective_ref = 0.0;  // F + zeta term
    double power = 0.0;          // F
    int iterations = 0;

    bool feasible() const { return status == SolveStatus::kOptimal; }
};

FixedSolve solve_fixed_problem(const NetworkState &state, const ChannelRealization &channels,
                               const PowerParams &params, const NetworkConfig &config,
                               const SolverSettings &settings, const ConicBackend &backend = default_backend(),
                               const ValidationOptions &options = {});

struct RelaxedSolve {
    SolveStatus status = SolveStatus::kNumericalFailure;
    BeamformingSolution beams;
    RelaxedFlags flags;
    double objective = 0.0;

    bool feasible() const { return status == SolveStatus::kOptimal; }
};

RelaxedSolve solve_relaxed_problem(const ChannelRealization &channels, const PowerParams &params,
                                   const NetworkConfig &config, const SolverSettings &settings,
                                   const ConicBackend &backend = default_backend());

}  // namespace cran

// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference for small networks. Every association matrix that
// respects the fronthaul caps is solved as a fixed problem, with a_l set to
// max_k b_lk, and the best one is kept. Also checks the two problems'
// constraint sets against each other's optima.
// ------------------------------------------------------------------------

#pragma once

#include "cran/socp_form.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cran {

/// Largest L*K the enumeration accepts (2^12 association matrices).
inline constexpr std::size_t kOracleMaxPairs = 12;

class OracleLimitError : public std::invalid_argument {
public:
    explicit OracleLimitError(std::size_t pairs);
};

enum class OracleObjective {
    kPri,  // minimize F; every served pair must carry a nonzero beamformer
    kRef,  // minimize F + zeta / (L K) * sum b
};

struct OracleResult {
    bool feasible = false;
    NetworkState state;
    BeamformingSolution beams;
    double value = 0.0;          // F for kPri, F-hat for kRef
    double power = 0.0;          // F
    double objective_ref = 0.0;  // F-hat
    int configurations = 0;
    int numerical_failures = 0;
};

/// Throws OracleLimitError when L*K > kOracleMaxPairs. Ties keep the first
/// association matrix in enumeration order (bit l*K + k of a counter).
OracleResult enumerate_optimal(const ChannelRealization &channels, const PowerParams &params,
                               const NetworkConfig &config, OracleObjective objective,
                               const SolverSettings &settings = {}, const ConicBackend &backend = default_backend());

struct ConstraintViolation {
    std::string id;
    int rrh = -1;
    int user = -1;
    double amount = 0.0;

    std::string describe() const;
};

/// Relative slack allowed by the constraint checks below.
inline constexpr double kConstraintCheckTol = 1e-6;

/// Ids: sinr, power, fronthaul, activity_link, beam_link, binary.
std::vector<ConstraintViolation> check_pri_constraints(const NetworkState &state, const BeamformingSolution &beams,
                                                       const ChannelRealization &channels,
                                                       const NetworkConfig &config,
                                                       double tol = kConstraintCheckTol);

/// Ids: qos_cone, qos_phase, power, fronthaul_activity, beam_coupling, binary.
std::vector<ConstraintViolation> check_ref_constraints(const NetworkState &state, const BeamformingSolution &beams,
                                                       const ChannelRealization &channels,
                                                       const NetworkConfig &config,
                                                       double tol = kConstraintCheckTol);

enum class Verdict { kPass, kFail, kVacuous };
std::string to_string(Verdict verdict);

struct Lemma1Report {
    Verdict verdict = Verdict::kVacuous;
    std::vector<ConstraintViolation> ref_optimum_in_pri;
    std::vector<ConstraintViolation> pri_optimum_in_ref;
};

/// Both optima from a single pass over the association matrices.
struct Certification {
    OracleResult pri;
    OracleResult ref;
    Lemma1Report lemma1;
    /// F(ref optimum) - F(pri optimum); NaN when either is infeasible.
    double gap = 0.0;
};

Certification certify(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                      const SolverSettings &settings = {}, const ConicBackend &backend = default_backend());

Lemma1Report verify_lemma1(const ChannelRealization &channels, const PowerParams &params,
                           const NetworkConfig &config, const SolverSettings &settings = {},
                           const ConicBackend &backend = default_backend());

/// Throws std::runtime_error when either enumeration finds no feasible point.
double verify_theorem1(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                       const SolverSettings &settings = {}, const ConicBackend &backend = default_backend());

}  // namespace cran

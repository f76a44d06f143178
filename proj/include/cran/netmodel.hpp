// SPDX-License-Identifier: Apache-2.0
//
// Network model for a fronthaul-limited cloud RAN: RRH/MU dimensions, power
// model, channel container, network state and beamformers, plus the SINR and
// power functions evaluated on them.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cran {

/// Raised when vectors or matrices do not match the configured L, K or N_l.
class DimensionError : public std::invalid_argument {
public:
    DimensionError(const std::string &what, std::ptrdiff_t rrh = -1, std::ptrdiff_t user = -1);
    std::ptrdiff_t rrh() const noexcept { return rrh_; }
    std::ptrdiff_t user() const noexcept { return user_; }

private:
    std::ptrdiff_t rrh_;
    std::ptrdiff_t user_;
};

struct NetworkConfig {
    std::size_t num_rrhs = 0;
    std::size_t num_users = 0;
    std::vector<int> antennas;          // N_l
    std::vector<int> fronthaul_caps;    // C_l, max simultaneous links per RRH
    std::vector<double> p_max_w;        // per-RRH transmit power budget
    std::vector<double> target_sinr;    // linear gamma_k
    double zeta = 1e-3;                 // association-count penalty weight

    /// Same N, C, P^MAX and gamma for every RRH / user.
    static NetworkConfig uniform(std::size_t num_rrhs, std::size_t num_users, int antennas, int fronthaul_cap,
                                 double p_max_w, double target_sinr, double zeta = 1e-3);

    /// Throws std::invalid_argument on a broken invariant.
    void validate() const;

    int total_fronthaul() const;
    int total_antennas() const;
};

struct PowerParams {
    std::vector<double> p_cir_w;
    std::vector<double> p_slp_w;
    std::vector<double> eta;

    /// Pico-cell defaults: P^CIR = 6.8 W, P^SLP = 4.3 W, eta = 0.25.
    static PowerParams pico(std::size_t num_rrhs);
    static PowerParams uniform(std::size_t num_rrhs, double p_cir_w, double p_slp_w, double eta);

    double p_cms(std::size_t l) const { return p_cir_w[l] - p_slp_w[l]; }
    std::vector<double> p_cms_w() const;
    double total_sleep_power() const;

    void validate(std::size_t num_rrhs) const;
};

/// h_{l,k} for every RRH-MU pair, stored RRH-major.
struct ChannelRealization {
    std::size_t num_rrhs = 0;
    std::size_t num_users = 0;
    std::vector<Eigen::VectorXcd> h;
    std::vector<double> noise_power_w;

    ChannelRealization() = default;
    ChannelRealization(std::size_t num_rrhs, std::size_t num_users, const std::vector<int> &antennas,
                       double noise_power_w);

    const Eigen::VectorXcd &at(std::size_t l, std::size_t k) const { return h[l * num_users + k]; }
    Eigen::VectorXcd &at(std::size_t l, std::size_t k) { return h[l * num_users + k]; }

    void validate(const NetworkConfig &config) const;
};

/// Binary activity flags a_l and association flags b_{l,k}.
struct NetworkState {
    Eigen::VectorXi a;
    Eigen::MatrixXi b;  // L x K

    NetworkState() = default;
    NetworkState(std::size_t num_rrhs, std::size_t num_users);

    /// a_l = max_k b_{l,k}.
    static NetworkState from_association(const Eigen::MatrixXi &b);

    int association_count() const { return b.sum(); }
    int active_rrhs() const { return a.sum(); }
    bool operator==(const NetworkState &other) const { return a == other.a && b == other.b; }
};

struct BeamformingSolution {
    std::size_t num_rrhs = 0;
    std::size_t num_users = 0;
    std::vector<Eigen::VectorXcd> w;
    double objective_value = 0.0;
    std::vector<double> per_user_sinr;
    bool feasible = false;

    BeamformingSolution() = default;
    BeamformingSolution(std::size_t num_rrhs, std::size_t num_users, const std::vector<int> &antennas);

    const Eigen::VectorXcd &at(std::size_t l, std::size_t k) const { return w[l * num_users + k]; }
    Eigen::VectorXcd &at(std::size_t l, std::size_t k) { return w[l * num_users + k]; }

    /// sum_k ||w_{l,k}||^2
    double rrh_transmit_power(std::size_t l) const;
};

enum class ViolationKind {
    kInactiveButAssociated,  // a_l = 0 with some b_{l,k} = 1
    kActiveButIdle,          // a_l = 1 with every b_{l,k} = 0
    kFronthaulExceeded,      // sum_k b_{l,k} > C_l
    kNonBinary,
};

struct StateViolation {
    ViolationKind kind;
    std::size_t rrh;
    std::string describe() const;
};

struct ValidationOptions {
    /// Accept a_l = 1 with no associated user (all-active baselines keep idle RRHs powered).
    bool allow_idle_active = false;
};

/// SINR tolerance used for feasibility decisions.
inline constexpr double kSinrFeasibilityTol = 1e-6;
/// ||w|| below this multiple of sqrt(P^MAX) counts as a zero beamformer.
inline constexpr double kZeroBeamformerRelTol = 1e-7;

double sinr(const ChannelRealization &channels, const BeamformingSolution &solution, std::size_t k);
std::vector<double> all_sinrs(const ChannelRealization &channels, const BeamformingSolution &solution);

/// F = sum_l (a_l P^CMS_l + ||w_l||^2 / eta_l). The constant sum_l P^SLP_l is not included.
double network_power(const NetworkState &state, const BeamformingSolution &solution, const PowerParams &params);

/// F plus the zeta / (L K) weighted association count.
double objective_ref(const NetworkState &state, const BeamformingSolution &solution, const PowerParams &params,
                     const NetworkConfig &config);

std::vector<StateViolation> validate_state(const NetworkState &state, const NetworkConfig &config,
                                           const ValidationOptions &options = {});

bool is_zero_beamformer(const Eigen::VectorXcd &w, double p_max_w);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace cran

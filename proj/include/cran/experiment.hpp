// SPDX-License-Identifier: Apache-2.0
//
// Seeded sweeps over target SINR and fronthaul capacity, their CSV output and
// per-group summaries, and the small-instance certification run.
//
// The instance for a row depends only on (seed, K) and the static model
// parameters, so every gamma / C point of a seed shares one topology and one
// channel draw.
// ------------------------------------------------------------------------

#pragma once

#include "cran/baseline.hpp"
#include "cran/channel.hpp"
#include "cran/inflation.hpp"
#include "cran/oracle.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cran {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Algorithm { kInflation, kLteA, kOracle };
std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// One fronthaul sweep point: the same C for every RRH, or an explicit list.
struct FronthaulPoint {
    int uniform = 0;
    std::vector<int> per_rrh;

    std::vector<int> caps(std::size_t num_rrhs) const;
    std::string label() const;
};

struct ExperimentConfig {
    std::vector<std::uint64_t> seeds;
    std::size_t num_rrhs = 6;
    std::vector<std::size_t> num_users{6};
    int antennas = 2;
    std::vector<FronthaulPoint> fronthaul{FronthaulPoint{4, {}}};
    std::vector<double> gamma_db{6.0};
    double region_half_width_m = kDefaultHalfWidthM;
    double p_max_w = 10.0;
    double zeta = 1e-3;
    ChannelParams channel;
    double p_cir_w = 6.8;
    double p_slp_w = 4.3;
    double eta = 0.25;
    std::vector<Algorithm> algorithms{Algorithm::kInflation, Algorithm::kLteA};
    SolverSettings solver;
    InflationOptions inflation;
    int workers = 1;
    bool record_wall_time = true;

    /// Throws ConfigError.
    void validate() const;

    static ExperimentConfig desk_sinr();
    static ExperimentConfig desk_fronthaul();
    static ExperimentConfig full_scale_sinr();
    static ExperimentConfig full_scale_fronthaul();
    /// L = 3, N = 2, K = 2, C = 1, 50 seeds, all three algorithms.
    static ExperimentConfig certification();
};

/// Applies the keys of a JSON object on top of base. Unknown keys, wrong
/// types and broken invariants raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base);
ExperimentConfig load_config(const std::string &path, ExperimentConfig base);

/// "1-20", "3", "1,4,9-12".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct SweepInstance {
    NetworkConfig config;
    PowerParams params;
    Topology topology;
    ChannelRealization channels;
};

SweepInstance make_instance(const ExperimentConfig &experiment, std::uint64_t seed, std::size_t num_users,
                            double gamma_db, const FronthaulPoint &fronthaul);

struct SweepRow {
    std::uint64_t seed = 0;
    std::size_t num_users = 0;
    double gamma_db = 0.0;
    std::size_t fronthaul_index = 0;
    std::string fronthaul_cap;
    Algorithm algorithm = Algorithm::kInflation;
    bool feasible = false;
    double power_w = 0.0;      // F + sum P^SLP
    double objective_f = 0.0;  // F
    int active_rrhs = 0;
    int socp_solves = 0;
    double wall_time_ms = 0.0;
    bool numerical_failure = false;
};

SweepRow run_point(const ExperimentConfig &experiment, std::uint64_t seed, std::size_t num_users, double gamma_db,
                   std::size_t fronthaul_index, Algorithm algorithm);

/// Rows come back sorted by (K, C point, gamma, seed, algorithm) whatever the worker count.
std::vector<SweepRow> run_sweep(const ExperimentConfig &experiment);

inline constexpr const char *kSweepCsvHeader =
    "seed,K,gamma_db,fronthaul_cap,algorithm,feasible,power_w,objective_f,active_rrhs,socp_solves,wall_time_ms";

void write_rows_csv(std::ostream &os, const std::vector<SweepRow> &rows);

struct SummaryRow {
    double gamma_db = 0.0;
    std::string fronthaul_cap;
    Algorithm algorithm = Algorithm::kInflation;
    std::size_t num_users = 0;
    int total = 0;
    int feasible = 0;
    double feasibility_rate = 0.0;
    double mean_power_w = 0.0;
    double se_power_w = 0.0;
    double mean_objective_f = 0.0;
    double se_objective_f = 0.0;
    double mean_active_rrhs = 0.0;
    double se_active_rrhs = 0.0;
};

/// Means and standard errors over the feasible rows of each
/// (gamma_db, fronthaul_cap, algorithm, K) group.
std::vector<SummaryRow> summarize(const std::vector<SweepRow> &rows);
void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &summary);

struct CertificationRow {
    std::uint64_t seed = 0;
    bool feasible = false;  // both enumerations found a point
    double gap = 0.0;
    Verdict lemma1 = Verdict::kVacuous;
    std::vector<ConstraintViolation> violations;
    SolveStatus relaxed_status = SolveStatus::kNumericalFailure;
    double relaxed_objective = 0.0;
    double ref_optimum = 0.0;  // F-hat
    double pri_optimum = 0.0;  // F
    bool inflation_feasible = false;
    double inflation_power = 0.0;  // F
    int inflation_solves = 0;
    int solve_budget = 0;  // sum C + 1
    bool inflation_state_valid = false;
    int oracle_numerical_failures = 0;
};

CertificationRow certify_seed(const ExperimentConfig &experiment, std::uint64_t seed);
/// One row per seed of experiment, at its first K, gamma and C point.
std::vector<CertificationRow> run_certification(const ExperimentConfig &experiment);

/// Runs fn(i) for i in [0, count) on up to workers threads; rethrows the first exception.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &fn);

}  // namespace cran

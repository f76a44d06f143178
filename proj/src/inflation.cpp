// SPDX-License-Identifier: Apache-2.0

#include "cran/inflation.hpp"

#include <cstdio>
#include <ostream>
#include <set>
#include <utility>

namespace cran {

Eigen::MatrixXd priority_levels(const BeamformingSolution &relaxed, const ChannelRealization &channels,
                                const NetworkConfig &config, double epsilon)
{
    config.validate();
    channels.validate(config);
    const std::size_t L = config.num_rrhs;
    const std::size_t K = config.num_users;
    if (relaxed.w.size() != L * K)
        throw DimensionError("relaxed solution has the wrong number of beamformers");
    const int total = config.total_fronthaul();
    if (total <= 0)
        throw std::invalid_argument("priority_levels: total fronthaul capacity is zero");

    Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(K));
    for (std::size_t l = 0; l < L; ++l)
    {
        const double share = static_cast<double>(config.fronthaul_caps[l]) / total;
        for (std::size_t k = 0; k < K; ++k)
        {
            const Eigen::VectorXcd &w = relaxed.at(l, k);
            if (w.size() != channels.at(l, k).size())
                throw DimensionError("relaxed beamformer length differs from N_l", static_cast<std::ptrdiff_t>(l),
                                     static_cast<std::ptrdiff_t>(k));
            const double signal = std::norm(channels.at(l, k).dot(w)) / channels.noise_power_w[k];
            double leakage = 0.0;
            for (std::size_t i = 0; i < K; ++i)
                if (i != k)
                    leakage += std::norm(channels.at(l, i).dot(w)) / channels.noise_power_w[i];
            alpha(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
                signal / (leakage + epsilon) * share;
        }
    }
    return alpha;
}

void InflationTrace::write_csv(std::ostream &os) const
{
    os << "n,l_star,k_star,objective,feasible,reverted,remaining,numerical_failure\n";
    char buf[64];
    for (const InflationStep &s : steps)
    {
        std::snprintf(buf, sizeof buf, "%.9g", s.objective);
        os << s.n << ',' << s.l_star << ',' << s.k_star << ',' << buf << ',' << int(s.feasible) << ','
           << int(s.reverted) << ',' << s.remaining << ',' << int(s.numerical_failure) << '\n';
    }
}

InflationResult inflate(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                        const SolverSettings &settings, const InflationOptions &options,
                        const ConicBackend &backend)
{
    config.validate();
    params.validate(config.num_rrhs);
    channels.validate(config);
    settings.validate();

    const std::size_t L = config.num_rrhs;
    const std::size_t K = config.num_users;

    InflationResult result;
    result.state = NetworkState(L, K);
    result.beams = BeamformingSolution(L, K, config.antennas);
    InflationTrace &trace = result.trace;

    double f0 = config.zeta;
    for (std::size_t l = 0; l < L; ++l)
        f0 += params.p_cms(l) + config.p_max_w[l] / params.eta[l];
    trace.initial_objective = f0;

    // Pairs on an RRH without fronthaul can never be served.
    std::set<std::pair<std::size_t, std::size_t>> pool;
    for (std::size_t l = 0; l < L; ++l)
        if (config.fronthaul_caps[l] > 0)
            for (std::size_t k = 0; k < K; ++k)
                pool.emplace(l, k);
    if (pool.empty())
        return result;

    const RelaxedSolve relaxed = solve_relaxed_problem(channels, params, config, settings, backend);
    ++trace.socp_solves;
    trace.relaxed_status = relaxed.status;
    if (relaxed.status == SolveStatus::kNumericalFailure)
        ++trace.numerical_failures;
    if (!relaxed.feasible())
        return result;

    const Eigen::MatrixXd alpha = priority_levels(relaxed.beams, channels, config, options.epsilon);

    NetworkState state(L, K);
    double previous = f0;
    for (int n = 1; !pool.empty(); ++n)
    {
        // std::set iterates in (l, k) order, so the first strict maximum wins ties.
        auto best = pool.begin();
        for (auto it = pool.begin(); it != pool.end(); ++it)
            if (alpha(Eigen::Index(it->first), Eigen::Index(it->second)) >
                alpha(Eigen::Index(best->first), Eigen::Index(best->second)))
                best = it;
        const auto [ls, ks] = *best;
        pool.erase(best);

        state.b(Eigen::Index(ls), Eigen::Index(ks)) = 1;
        state.a(Eigen::Index(ls)) = 1;
        if (state.b.row(Eigen::Index(ls)).sum() >= config.fronthaul_caps[ls])
            std::erase_if(pool, [l = ls](const auto &p) { return p.first == l; });

        const FixedSolve step = solve_fixed_problem(state, channels, params, config, settings, backend);
        ++trace.socp_solves;

        InflationStep rec;
        rec.n = n;
        rec.l_star = int(ls);
        rec.k_star = int(ks);
        rec.feasible = step.feasible();
        rec.numerical_failure = step.status == SolveStatus::kNumericalFailure;
        if (rec.numerical_failure)
            ++trace.numerical_failures;

        bool stop = false;
        if (!step.feasible())
        {
            rec.attempted = f0;
            rec.objective = f0;
        }
        else if (step.objective_ref > previous)
        {
            rec.attempted = step.objective_ref;
            rec.objective = previous;
            rec.reverted = true;
            state.b(Eigen::Index(ls), Eigen::Index(ks)) = 0;
            state.a(Eigen::Index(ls)) = state.b.row(Eigen::Index(ls)).maxCoeff();
            stop = options.reversion == ReversionPolicy::kStop;
        }
        else
        {
            rec.attempted = step.objective_ref;
            rec.objective = step.objective_ref;
            result.state = state;
            result.beams = step.beams;
            result.feasible = true;
            result.objective_ref = step.objective_ref;
            result.power = step.power;
        }
        previous = rec.objective;
        rec.remaining = pool.size();
        trace.steps.push_back(rec);
        if (stop)
            break;
    }
    return result;
}

}  // namespace cran

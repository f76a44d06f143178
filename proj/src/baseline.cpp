// SPDX-License-Identifier: Apache-2.0

#include "cran/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace cran {

NetworkState lte_a_state(const Topology &topology, const NetworkConfig &config)
{
    config.validate();
    const std::size_t L = config.num_rrhs;
    const std::size_t K = config.num_users;
    if (topology.rrh_positions.size() != L || topology.mu_positions.size() != K)
        throw DimensionError("topology does not match the configuration");
    if (config.total_fronthaul() < int(K))
        throw std::invalid_argument("lte_a_state: total fronthaul capacity is below the number of users");

    // RRHs ranked by distance for each user; stable so equal distances keep index order.
    std::vector<std::vector<std::size_t>> ranking(K);
    std::vector<double> margin(K, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < K; ++k)
    {
        auto &r = ranking[k];
        r.resize(L);
        std::iota(r.begin(), r.end(), std::size_t{0});
        std::stable_sort(r.begin(), r.end(),
                         [&](std::size_t p, std::size_t q) { return topology.distance(p, k) < topology.distance(q, k); });
        if (L > 1)
            margin[k] = topology.distance(r[1], k) - topology.distance(r[0], k);
    }

    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return margin[p] > margin[q]; });

    NetworkState state(L, K);
    state.a.setOnes();
    std::vector<int> free(config.fronthaul_caps);
    for (std::size_t k : order)
        for (std::size_t l : ranking[k])
            if (free[l] > 0)
            {
                --free[l];
                state.b(Eigen::Index(l), Eigen::Index(k)) = 1;
                break;
            }
    return state;
}

FixedSolve lte_a_solve(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                       const NetworkState &state, const SolverSettings &settings, const ConicBackend &backend)
{
    ValidationOptions options;
    options.allow_idle_active = true;
    return solve_fixed_problem(state, channels, params, config, settings, backend, options);
}

}  // namespace cran

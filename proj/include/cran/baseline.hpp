// SPDX-License-Identifier: Apache-2.0
//
// All-active comparison scheme: every RRH stays on and each user is served by
// a single RRH, its nearest one unless that RRH is out of fronthaul links.
// ------------------------------------------------------------------------

#pragma once

#include "cran/channel.hpp"
#include "cran/socp_form.hpp"

namespace cran {

/// Users are placed in order of decreasing (second nearest - nearest)
/// distance, lower index first on ties, each on the closest RRH that still has
/// a free link. Throws std::invalid_argument when sum_l C_l < K.
NetworkState lte_a_state(const Topology &topology, const NetworkConfig &config);

/// Fixed problem on the given state with idle RRHs kept powered.
FixedSolve lte_a_solve(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                       const NetworkState &state, const SolverSettings &settings = {},
                       const ConicBackend &backend = default_backend());

}  // namespace cran

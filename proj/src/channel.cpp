// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "cran/channel.hpp"

#include "cran/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cran {

double distance_m(const Point &p, const Point &q)
{
    return std::hypot(p.x - q.x, p.y - q.y);
}

void ChannelParams::validate() const
{
    const double all[] = {pathloss_offset_db, pathloss_slope_db_per_decade, shadowing_std_db,
                          noise_density_dbm_per_hz, bandwidth_hz, antenna_gain_dbi};
    for (double v : all)
        if (!std::isfinite(v))
            throw std::invalid_argument("channel parameters must be finite");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    if (shadowing_std_db < 0.0)
        throw std::invalid_argument("shadowing standard deviation must be nonnegative");
}

Topology generate_topology(std::uint64_t seed, const NetworkConfig &config, double half_width_m)
{
    if (!(half_width_m > 0.0))
        throw std::invalid_argument("region half width must be positive");

    RandomStream rng(seed, RngStream::kTopology);
    Topology t;
    t.region_half_width_m = half_width_m;
    t.rrh_positions.resize(config.num_rrhs);
    t.mu_positions.resize(config.num_users);
    for (auto &p : t.rrh_positions)
    {
        p.x = rng.uniform(-half_width_m, half_width_m);
        p.y = rng.uniform(-half_width_m, half_width_m);
    }
    for (auto &p : t.mu_positions)
    {
        p.x = rng.uniform(-half_width_m, half_width_m);
        p.y = rng.uniform(-half_width_m, half_width_m);
    }
    return t;
}

double path_loss_db(double d_km)
{
    return path_loss_db(d_km, ChannelParams{});
}

double path_loss_db(double d_km, const ChannelParams &params)
{
    if (!(d_km > 0.0))
        throw std::domain_error("path loss is undefined for nonpositive distance");
    return params.pathloss_offset_db + params.pathloss_slope_db_per_decade * std::log10(d_km);
}

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double noise_power_w(const ChannelParams &params)
{
    return dbm_to_watts(params.noise_density_dbm_per_hz + 10.0 * std::log10(params.bandwidth_hz));
}

ChannelRealization generate_channel(std::uint64_t seed, const Topology &topology, const NetworkConfig &config,
                                    const ChannelParams &params)
{
    params.validate();
    if (topology.rrh_positions.size() != config.num_rrhs || topology.mu_positions.size() != config.num_users)
        throw DimensionError("topology does not match network size");

    RandomStream shadowing(seed, RngStream::kShadowing);
    RandomStream fading(seed, RngStream::kFading);

    ChannelRealization ch(config.num_rrhs, config.num_users, config.antennas, noise_power_w(params));
    for (std::size_t l = 0; l < config.num_rrhs; ++l)
        for (std::size_t k = 0; k < config.num_users; ++k)
        {
            const double d_km = std::max(topology.distance(l, k), kMinDistanceM) / 1000.0;
            const double s_db = params.shadowing_std_db * shadowing.normal();
            const double gain = std::pow(10.0, (-path_loss_db(d_km, params) + params.antenna_gain_dbi + s_db) / 20.0);
            auto &h = ch.at(l, k);
            for (Eigen::Index n = 0; n < h.size(); ++n)
                h(n) = gain * fading.complex_normal();
        }
    return ch;
}

}  // namespace cran

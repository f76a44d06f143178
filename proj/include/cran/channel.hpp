// SPDX-License-Identifier: Apache-2.0
//
// Seeded drop of RRHs and users in a square region and the matching
// path-loss / log-normal shadowing / Rayleigh channel realization.
// ------------------------------------------------------------------------

#pragma once

#include "cran/netmodel.hpp"

#include <cstdint>
#include <vector>

namespace cran {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance_m(const Point &p, const Point &q);

struct Topology {
    std::vector<Point> rrh_positions;
    std::vector<Point> mu_positions;
    double region_half_width_m = 1500.0;

    double distance(std::size_t l, std::size_t k) const { return distance_m(rrh_positions[l], mu_positions[k]); }
};

struct ChannelParams {
    double pathloss_offset_db = 148.1;
    double pathloss_slope_db_per_decade = 37.6;
    double shadowing_std_db = 8.0;
    double noise_density_dbm_per_hz = -174.0;
    double bandwidth_hz = 10e6;
    double antenna_gain_dbi = 9.0;

    void validate() const;
};

/// RRH-MU separations below this are clamped before evaluating path loss.
inline constexpr double kMinDistanceM = 10.0;
inline constexpr double kDefaultHalfWidthM = 1500.0;

Topology generate_topology(std::uint64_t seed, const NetworkConfig &config, double half_width_m = kDefaultHalfWidthM);

/// Path loss in dB at distance d_km with the default model parameters.
double path_loss_db(double d_km);
double path_loss_db(double d_km, const ChannelParams &params);

/// Thermal noise over the system bandwidth, in watts.
double noise_power_w(const ChannelParams &params);

ChannelRealization generate_channel(std::uint64_t seed, const Topology &topology, const NetworkConfig &config,
                                    const ChannelParams &params = {});

double dbm_to_watts(double dbm);

}  // namespace cran

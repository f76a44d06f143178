// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "cran/channel.hpp"
#include "cran/rng.hpp"

#include <cmath>

using namespace cran;

namespace {

NetworkConfig sized(std::size_t L, std::size_t K, int N = 2)
{
    return NetworkConfig::uniform(L, K, N, 1, 10.0, 1.0);
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double se() const { return std::sqrt(var / n); }
    double n = 0.0;
};

template <class F>
Moments moments(int count, F draw)
{
    Moments m;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < count; ++i)
    {
        const double x = draw();
        sum += x;
        sq += x * x;
    }
    m.n = count;
    m.mean = sum / count;
    m.var = (sq - count * m.mean * m.mean) / (count - 1);
    return m;
}

}  // namespace

TEST_CASE("topology is reproducible from its seed")
{
    const auto a = generate_topology(7, sized(4, 5));
    const auto b = generate_topology(7, sized(4, 5));
    for (std::size_t l = 0; l < 4; ++l)
    {
        CHECK(a.rrh_positions[l].x == b.rrh_positions[l].x);
        CHECK(a.rrh_positions[l].y == b.rrh_positions[l].y);
    }
    for (std::size_t k = 0; k < 5; ++k)
    {
        CHECK(a.mu_positions[k].x == b.mu_positions[k].x);
        CHECK(a.mu_positions[k].y == b.mu_positions[k].y);
    }
    const auto c = generate_topology(8, sized(4, 5));
    CHECK(c.rrh_positions[0].x != a.rrh_positions[0].x);
}

TEST_CASE("topology coordinates are uniform over the square")
{
    const auto t = generate_topology(11, sized(10000, 1));
    std::size_t i = 0;
    const auto m = moments(10000, [&] { return t.rrh_positions[i++].x; });
    CHECK(std::abs(m.mean) < 3.0 * m.se());
    // Uniform on [-w, w] has variance w^2 / 3.
    CHECK(m.var == doctest::Approx(1500.0 * 1500.0 / 3.0).epsilon(0.05));

    const auto small = generate_topology(12, sized(50, 50), 0.5);
    for (const auto *list : {&small.rrh_positions, &small.mu_positions})
        for (const Point &p : *list)
        {
            CHECK(std::abs(p.x) <= 0.5);
            CHECK(std::abs(p.y) <= 0.5);
        }
    CHECK_THROWS(generate_topology(1, sized(1, 1), 0.0));
}

TEST_CASE("path loss model values")
{
    CHECK(path_loss_db(1.0) == doctest::Approx(148.1));
    CHECK(path_loss_db(0.1) == doctest::Approx(110.5));
    CHECK(path_loss_db(10.0) == doctest::Approx(185.7));
    CHECK_THROWS_AS(path_loss_db(0.0), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(-1.0), std::domain_error);
}

TEST_CASE("thermal noise power")
{
    ChannelParams p;
    CHECK(noise_power_w(p) == doctest::Approx(3.981e-14).epsilon(1e-3));
    p.bandwidth_hz = 1.0;
    CHECK(noise_power_w(p) == doctest::Approx(3.981e-21).epsilon(1e-3));
    p.bandwidth_hz = 20e6;
    CHECK(10.0 * std::log10(noise_power_w(p)) + 30.0 == doctest::Approx(-101.0).epsilon(1e-3));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
}

TEST_CASE("channel realization is reproducible and carries the thermal noise")
{
    const NetworkConfig c = sized(3, 4);
    const auto t = generate_topology(5, c);
    const auto a = generate_channel(5, t, c);
    const auto b = generate_channel(5, t, c);
    for (std::size_t i = 0; i < a.h.size(); ++i)
        CHECK(a.h[i] == b.h[i]);
    for (double s2 : a.noise_power_w)
        CHECK(s2 == noise_power_w(ChannelParams{}));
    CHECK_NOTHROW(a.validate(c));
}

TEST_CASE("fading components have variance one half")
{
    RandomStream rng(3, RngStream::kFading);
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        const auto z = rng.complex_normal();
        re += z.real();
        im += z.imag();
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
    }
    CHECK((re2 / n - (re / n) * (re / n)) == doctest::Approx(0.5).epsilon(0.02));
    CHECK((im2 / n - (im / n) * (im / n)) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("mean-square gain follows the path-loss slope without shadowing")
{
    const NetworkConfig c = sized(1, 2);
    Topology t;
    t.rrh_positions = {{0.0, 0.0}};
    t.mu_positions = {{100.0, 0.0}, {1000.0, 0.0}};
    ChannelParams p;
    p.shadowing_std_db = 0.0;
    double near = 0.0, far = 0.0;
    const int seeds = 4000;
    for (int s = 0; s < seeds; ++s)
    {
        const auto ch = generate_channel(std::uint64_t(s), t, c, p);
        near += ch.at(0, 0).squaredNorm();
        far += ch.at(0, 1).squaredNorm();
    }
    // Each mean has relative standard error 1/sqrt(2 * seeds).
    CHECK(near / far == doctest::Approx(std::pow(10.0, 3.76)).epsilon(0.05));
    const double expected_near = 2.0 * std::pow(10.0, (-path_loss_db(0.1) + 9.0) / 10.0);
    CHECK(near / seeds == doctest::Approx(expected_near).epsilon(0.05));
}

TEST_CASE("channel strength falls with distance under shadowing")
{
    const NetworkConfig c = sized(1, 2);
    Topology t;
    t.rrh_positions = {{0.0, 0.0}};
    t.mu_positions = {{0.0, 1000.0}, {0.0, 100.0}};
    double far = 0.0, near = 0.0;
    for (int s = 0; s < 1000; ++s)
    {
        const auto ch = generate_channel(std::uint64_t(s), t, c);
        far += ch.at(0, 0).squaredNorm();
        near += ch.at(0, 1).squaredNorm();
    }
    CHECK(far < near);
}

TEST_CASE("shadowing is zero mean in dB")
{
    // With many antennas the per-link average of |v|^2 is close to one, so the
    // dB gain minus the path loss isolates the shadowing draw.
    const int N = 256;
    const NetworkConfig c = sized(40, 50, N);
    const auto t = generate_topology(21, c);
    const auto ch = generate_channel(21, t, c);
    std::size_t i = 0;
    const auto m = moments(40 * 50, [&] {
        const std::size_t l = i / 50, k = i % 50;
        ++i;
        const double d_km = std::max(t.distance(l, k), kMinDistanceM) / 1000.0;
        const double gain_db = 10.0 * std::log10(ch.at(l, k).squaredNorm() / N);
        return gain_db + path_loss_db(d_km) - 9.0;
    });
    CHECK(std::abs(m.mean) < 3.0 * m.se());
    CHECK(std::sqrt(m.var) == doctest::Approx(8.0).epsilon(0.1));
}

TEST_CASE("co-located RRH and user are clamped to the minimum distance")
{
    const NetworkConfig c = sized(1, 1, 64);
    Topology t;
    t.rrh_positions = {{3.0, 4.0}};
    t.mu_positions = {{3.0, 4.0}};
    ChannelParams p;
    p.shadowing_std_db = 0.0;
    const auto ch = generate_channel(2, t, c, p);
    REQUIRE(ch.at(0, 0).allFinite());
    const double expected = 64.0 * std::pow(10.0, (-path_loss_db(kMinDistanceM / 1000.0) + 9.0) / 10.0);
    CHECK(ch.at(0, 0).squaredNorm() == doctest::Approx(expected).epsilon(0.4));
}

TEST_CASE("channel parameters reject non-finite values and zero bandwidth")
{
    ChannelParams p;
    p.bandwidth_hz = 0.0;
    CHECK_THROWS(p.validate());
    p = ChannelParams{};
    p.pathloss_offset_db = std::nan("");
    CHECK_THROWS(p.validate());
}

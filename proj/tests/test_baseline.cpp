// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "cran/baseline.hpp"
#include "cran/inflation.hpp"
#include "cran/oracle.hpp"
#include "support/reference_models.hpp"

using namespace cran;
using cran::testing::make_instance;

namespace {

Topology line(std::vector<double> rrh_x, std::vector<double> mu_x)
{
    Topology t;
    for (double x : rrh_x)
        t.rrh_positions.push_back({x, 0.0});
    for (double x : mu_x)
        t.mu_positions.push_back({x, 0.0});
    return t;
}

ValidationOptions idle_ok()
{
    ValidationOptions o;
    o.allow_idle_active = true;
    return o;
}

}  // namespace

TEST_CASE("user joins the nearer RRH")
{
    const auto t = line({-500.0, 500.0}, {400.0});
    const auto c = NetworkConfig::uniform(2, 1, 2, 1, 10.0, 1.0);
    const auto s = lte_a_state(t, c);
    CHECK(s.a == Eigen::VectorXi::Ones(2));
    CHECK(s.b(0, 0) == 0);
    CHECK(s.b(1, 0) == 1);
}

TEST_CASE("overflow spills the user with the smaller distance margin")
{
    // Both users are nearest to RRH 0; user 1 is the one closer to RRH 1.
    const auto t = line({-500.0, 500.0}, {-450.0, -100.0});
    const auto c = NetworkConfig::uniform(2, 2, 2, 1, 10.0, 1.0);
    const auto s = lte_a_state(t, c);
    CHECK(s.b(0, 0) == 1);
    CHECK(s.b(1, 1) == 1);
    CHECK(s.b.sum() == 2);
}

TEST_CASE("equal margins keep the lower user index in place")
{
    const auto t = line({0.0, 1000.0}, {-100.0, -100.0});
    const auto c = NetworkConfig::uniform(2, 2, 2, 1, 10.0, 1.0);
    const auto s = lte_a_state(t, c);
    CHECK(s.b(0, 0) == 1);
    CHECK(s.b(1, 1) == 1);
}

TEST_CASE("every user gets exactly one RRH and every RRH stays on")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
    {
        const auto inst = make_instance(seed, 6, 6, 2, 1 + int(seed % 3), 0.0);
        const auto s = lte_a_state(inst.topology, inst.config);
        CHECK(s.active_rrhs() == 6);
        for (Eigen::Index k = 0; k < 6; ++k)
            CHECK(s.b.col(k).sum() == 1);
        CHECK(validate_state(s, inst.config, idle_ok()).empty());
    }
}

TEST_CASE("too little fronthaul for the users is refused")
{
    const auto inst = make_instance(1, 2, 5, 2, 2, 0.0);
    CHECK_THROWS_AS(lte_a_state(inst.topology, inst.config), std::invalid_argument);
}

TEST_CASE("single RRH and user agree with inflation")
{
    const auto inst = make_instance(cran::testing::feasible_seed(1, 1, 1, 2, 1, 3.0, Eigen::MatrixXi::Ones(1, 1)), 1,
                                    1, 2, 1, 3.0);
    const auto s = lte_a_state(inst.topology, inst.config);
    const auto lte = lte_a_solve(inst.channels, inst.params, inst.config, s);
    const auto inf = inflate(inst.channels, inst.params, inst.config, {});
    REQUIRE(lte.feasible());
    REQUIRE(inf.feasible);
    CHECK(lte.power == doctest::Approx(inf.power).epsilon(1e-7));
}

TEST_CASE("the baseline never beats the enumeration optimum")
{
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 15; ++seed)
    {
        const auto inst = make_instance(seed, 3, 2, 2, 1, 0.0);
        const auto s = lte_a_state(inst.topology, inst.config);
        const auto lte = lte_a_solve(inst.channels, inst.params, inst.config, s);
        if (!lte.feasible())
            continue;
        const auto best = enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kPri);
        REQUIRE(best.feasible);
        CHECK(lte.power >= best.power - 1e-6);
        // Idle RRHs still draw their circuit power.
        double circuit = 0.0;
        for (std::size_t l = 0; l < 3; ++l)
            circuit += inst.params.p_cms(l);
        CHECK(lte.power >= circuit);
        ++compared;
    }
    CHECK(compared > 0);
}

// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "cran/inflation.hpp"
#include "cran/oracle.hpp"
#include "support/reference_models.hpp"

#include <algorithm>
#include <sstream>

using namespace cran;
using cran::testing::make_instance;

namespace {

// Real backend for the first call, numerical failure afterwards.
class FailAfterFirst final : public ConicBackend {
public:
    ConicSolution solve(const ConicProblem &problem, const SolverSettings &settings) const override
    {
        if (calls_++ == 0)
            return default_backend().solve(problem, settings);
        ConicSolution s;
        s.status = SolveStatus::kNumericalFailure;
        return s;
    }
    std::string name() const override { return "fail-after-first"; }

private:
    mutable int calls_ = 0;
};

void check_trace_invariants(const InflationResult &r, const NetworkConfig &config)
{
    bool seen_feasible = false;
    double last = 0.0;
    int previous_n = 0;
    for (const InflationStep &s : r.trace.steps)
    {
        CHECK(s.n > previous_n);
        previous_n = s.n;
        if (seen_feasible)
            CHECK(s.objective <= last);
        if (s.feasible)
            seen_feasible = true;
        last = s.objective;
    }
    CHECK(validate_state(r.state, config).empty());
    if (r.feasible)
        for (std::size_t k = 0; k < config.num_users; ++k)
            CHECK(r.beams.per_user_sinr[k] >= config.target_sinr[k] * (1.0 - 1e-6));
}

}  // namespace

TEST_CASE("priority of a lone user divides by epsilon only")
{
    ChannelRealization ch(2, 1, {2, 2}, 1.0);
    ch.at(0, 0) << 1.0, 0.0;
    ch.at(1, 0) << 0.0, 2.0;
    BeamformingSolution w(2, 1, {2, 2});
    w.at(0, 0) << 3.0, 0.0;
    NetworkConfig c = NetworkConfig::uniform(2, 1, 2, 1, 10.0, 1.0);
    c.fronthaul_caps = {1, 3};
    const auto alpha = priority_levels(w, ch, c);
    CHECK(alpha(0, 0) == doctest::Approx(9.0 / kPriorityEpsilon * 0.25));
    CHECK(std::isfinite(alpha(0, 0)));
    CHECK(alpha(1, 0) == 0.0);  // zero beamformer
}

TEST_CASE("priority levels scale with the fronthaul share")
{
    ChannelRealization ch(2, 2, {2, 2}, 1e-3);
    Eigen::VectorXcd h0(2), h1(2);
    h0 << std::complex<double>(0.4, 0.1), 0.2;
    h1 << 0.1, std::complex<double>(-0.3, 0.2);
    for (std::size_t l = 0; l < 2; ++l)
    {
        ch.at(l, 0) = h0;
        ch.at(l, 1) = h1;
    }
    BeamformingSolution w(2, 2, {2, 2});
    for (std::size_t l = 0; l < 2; ++l)
    {
        w.at(l, 0) << 1.0, std::complex<double>(0.0, 0.5);
        w.at(l, 1) << -0.2, 0.7;
    }
    NetworkConfig c = NetworkConfig::uniform(2, 2, 2, 1, 10.0, 1.0);
    c.fronthaul_caps = {1, 3};
    const auto alpha = priority_levels(w, ch, c);
    CHECK(alpha(1, 0) == doctest::Approx(3.0 * alpha(0, 0)));
    CHECK(alpha(1, 1) == doctest::Approx(3.0 * alpha(0, 1)));

    // Leakage of w_{0,0} towards user 1, in noise-normalized units.
    const double sig = std::norm(h0.dot(w.at(0, 0))) / 1e-3;
    const double leak = std::norm(h1.dot(w.at(0, 0))) / 1e-3;
    CHECK(alpha(0, 0) == doctest::Approx(sig / (leak + kPriorityEpsilon) * 0.25));
}

TEST_CASE("priority levels need some fronthaul")
{
    ChannelRealization ch(1, 1, {1}, 1.0);
    ch.at(0, 0) << 1.0;
    BeamformingSolution w(1, 1, {1});
    NetworkConfig c = NetworkConfig::uniform(1, 1, 1, 0, 10.0, 1.0);
    CHECK_THROWS_AS(priority_levels(w, ch, c), std::invalid_argument);
}

TEST_CASE("single link inflates to the matched filter")
{
    ChannelRealization ch(1, 1, {1}, 1e-13);
    ch.at(0, 0) << std::complex<double>(3e-6, -4e-6);
    const NetworkConfig c = NetworkConfig::uniform(1, 1, 1, 1, 100.0, 2.0);
    const PowerParams p = PowerParams::pico(1);
    const auto r = inflate(ch, p, c, {});
    REQUIRE(r.feasible);
    CHECK(r.state.a(0) == 1);
    CHECK(r.state.b(0, 0) == 1);
    CHECK(r.beams.per_user_sinr[0] == doctest::Approx(2.0).epsilon(1e-6));
    const double expected = 2.0 * 1e-13 / ch.at(0, 0).squaredNorm();
    CHECK(r.beams.at(0, 0).squaredNorm() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(r.power == doctest::Approx(2.5 + expected / 0.25).epsilon(1e-8));
    CHECK(r.socp_solves() == 2);
}

TEST_CASE("no fronthaul anywhere means no iterations and no solution")
{
    const auto inst = make_instance(4, 2, 2, 2, 0, 0.0);
    const auto r = inflate(inst.channels, inst.params, inst.config, {});
    CHECK_FALSE(r.feasible);
    CHECK(r.trace.steps.empty());
    CHECK(r.socp_solves() == 0);
}

TEST_CASE("pairs on RRHs without fronthaul are never selected")
{
    auto inst = make_instance(6, 3, 2, 2, 2, 0.0);
    inst.config.fronthaul_caps[1] = 0;
    const auto r = inflate(inst.channels, inst.params, inst.config, {});
    for (const InflationStep &s : r.trace.steps)
        CHECK(s.l_star != 1);
    CHECK(r.state.a(1) == 0);
}

TEST_CASE("infeasible relaxation stops after one solve")
{
    const auto inst = make_instance(2, 2, 2, 2, 1, 60.0);
    const auto r = inflate(inst.channels, inst.params, inst.config, {});
    CHECK(r.trace.relaxed_status == SolveStatus::kInfeasible);
    CHECK_FALSE(r.feasible);
    CHECK(r.trace.steps.empty());
    CHECK(r.socp_solves() == 1);
}

TEST_CASE("numerical failures count as infeasible steps and are tallied")
{
    const auto inst = make_instance(cran::testing::feasible_seed(1, 2, 2, 2, 2, 0.0, Eigen::MatrixXi::Ones(2, 2)), 2,
                                    2, 2, 2, 0.0);
    const FailAfterFirst backend;
    const auto r = inflate(inst.channels, inst.params, inst.config, {}, {}, backend);
    REQUIRE_FALSE(r.trace.steps.empty());
    CHECK_FALSE(r.feasible);
    for (const InflationStep &s : r.trace.steps)
    {
        CHECK(s.numerical_failure);
        CHECK_FALSE(s.feasible);
        CHECK(s.objective == r.trace.initial_objective);
    }
    CHECK(r.trace.numerical_failures == int(r.trace.steps.size()));
}

TEST_CASE("first pick is the largest relaxed priority")
{
    const auto inst = make_instance(cran::testing::feasible_seed(30, 3, 3, 2, 2, 3.0, Eigen::MatrixXi::Ones(3, 3)), 3,
                                    3, 2, 2, 3.0);
    const auto relaxed = solve_relaxed_problem(inst.channels, inst.params, inst.config, {});
    REQUIRE(relaxed.feasible());
    const auto alpha = priority_levels(relaxed.beams, inst.channels, inst.config);
    Eigen::Index l = 0, k = 0;
    alpha.maxCoeff(&l, &k);
    const auto r = inflate(inst.channels, inst.params, inst.config, {});
    REQUIRE_FALSE(r.trace.steps.empty());
    CHECK(r.trace.steps[0].l_star == int(l));
    CHECK(r.trace.steps[0].k_star == int(k));
}

TEST_CASE("inflation never beats the enumeration optimum and respects its budget")
{
    int feasible = 0, matched = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed)
    {
        const auto inst = make_instance(seed, 3, 2, 2, 1, 0.0);
        const auto r = inflate(inst.channels, inst.params, inst.config, {});
        CHECK(r.socp_solves() <= inst.config.total_fronthaul() + 1);
        check_trace_invariants(r, inst.config);
        const auto best = enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kPri);
        if (r.feasible)
        {
            REQUIRE(best.feasible);
            CHECK(r.power >= best.power - 1e-6);
            ++feasible;
            matched += std::abs(r.power - best.power) <= 1e-4;
        }
    }
    MESSAGE("inflation matched the optimum on " << matched << " of " << feasible << " feasible instances");
    CHECK(feasible > 0);
}

TEST_CASE("trace is deterministic and serializes to CSV")
{
    const auto inst = make_instance(9, 3, 3, 2, 2, 2.0);
    const auto a = inflate(inst.channels, inst.params, inst.config, {});
    const auto b = inflate(inst.channels, inst.params, inst.config, {});
    std::ostringstream sa, sb;
    a.trace.write_csv(sa);
    b.trace.write_csv(sb);
    CHECK(sa.str() == sb.str());
    CHECK(a.state == b.state);
    const std::string csv = sa.str();
    CHECK(csv.rfind("n,l_star,k_star,objective,feasible,reverted", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == long(a.trace.steps.size() + 1));
}

TEST_CASE("reversion ends the search unless continuing is requested")
{
    bool found = false;
    for (std::uint64_t seed = 1; seed <= 40 && !found; ++seed)
    {
        const auto inst = make_instance(seed, 3, 3, 2, 2, 0.0);
        const auto stop = inflate(inst.channels, inst.params, inst.config, {});
        if (stop.trace.steps.empty() || !stop.trace.steps.back().reverted)
            continue;
        found = true;
        int reverted = 0;
        for (const InflationStep &s : stop.trace.steps)
            reverted += s.reverted;
        CHECK(reverted == 1);
        CHECK(stop.socp_solves() <= inst.config.total_fronthaul() + 1);
        check_trace_invariants(stop, inst.config);

        InflationOptions keep_going;
        keep_going.reversion = ReversionPolicy::kContinue;
        const auto cont = inflate(inst.channels, inst.params, inst.config, {}, keep_going);
        CHECK(cont.trace.steps.size() >= stop.trace.steps.size());
        CHECK(cont.trace.steps.back().remaining == 0);
        CHECK(cont.objective_ref <= stop.objective_ref + 1e-9);
        check_trace_invariants(cont, inst.config);
    }
    CHECK(found);
}

// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "cran/oracle.hpp"
#include "support/reference_models.hpp"

#include <algorithm>

using namespace cran;
using cran::testing::make_instance;

namespace {

bool has_id(const std::vector<ConstraintViolation> &v, const std::string &id)
{
    return std::any_of(v.begin(), v.end(), [&](const ConstraintViolation &c) { return c.id == id; });
}

}  // namespace

TEST_CASE("single link optimum is the matched filter")
{
    ChannelRealization ch(1, 1, {2}, 1e-13);
    ch.at(0, 0) << std::complex<double>(1e-6, 2e-6), std::complex<double>(-2e-6, 0.0);
    const NetworkConfig c = NetworkConfig::uniform(1, 1, 2, 1, 10.0, 3.0);
    const auto r = enumerate_optimal(ch, PowerParams::pico(1), c, OracleObjective::kPri);
    REQUIRE(r.feasible);
    CHECK(r.state.b(0, 0) == 1);
    const double expected = 3.0 * 1e-13 / ch.at(0, 0).squaredNorm();
    CHECK(r.beams.at(0, 0).squaredNorm() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(2.5 + expected / 0.25).epsilon(1e-8));
}

TEST_CASE("no fronthaul means no feasible association")
{
    const auto inst = make_instance(3, 2, 2, 2, 0, 0.0);
    const auto r = enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kRef);
    CHECK_FALSE(r.feasible);
    CHECK(verify_lemma1(inst.channels, inst.params, inst.config).verdict == Verdict::kVacuous);
    CHECK_THROWS_AS(verify_theorem1(inst.channels, inst.params, inst.config), std::runtime_error);
}

TEST_CASE("enumeration refuses large networks")
{
    const auto inst = make_instance(1, 4, 4, 1, 1, 0.0);
    try
    {
        enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kPri);
        FAIL("expected OracleLimitError");
    }
    catch (const OracleLimitError &e)
    {
        CHECK(std::string(e.what()).find("12") != std::string::npos);
    }
}

TEST_CASE("ref and pri optima differ by at most zeta")
{
    for (double zeta : {1e-3, 3.0})
    {
        int checked = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            const auto inst = make_instance(seed, 3, 2, 2, 1, 0.0, zeta);
            const auto c = certify(inst.channels, inst.params, inst.config);
            if (!c.pri.feasible)
                continue;
            ++checked;
            CHECK(c.gap >= -1e-6);
            CHECK(c.gap <= zeta + 1e-6);
            if (c.pri.state == c.ref.state)
                CHECK(c.gap == 0.0);
            CHECK(c.lemma1.verdict == Verdict::kPass);
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("optima satisfy the opposite problem's constraints")
{
    const Eigen::MatrixXi all = Eigen::MatrixXi::Ones(2, 3);
    const auto inst = make_instance(cran::testing::feasible_seed(40, 2, 3, 2, 2, 3.0, all), 2, 3, 2, 2, 3.0);
    const auto report = verify_lemma1(inst.channels, inst.params, inst.config);
    CHECK(report.verdict == Verdict::kPass);
    CHECK(report.ref_optimum_in_pri.empty());
    CHECK(report.pri_optimum_in_ref.empty());
}

TEST_CASE("constraint checks name the violated constraint")
{
    const auto inst = make_instance(5, 2, 2, 2, 2, 0.0);
    NetworkState s(2, 2);
    s.b(0, 0) = 1;  // associated but inactive
    s.b(1, 1) = 1;
    s.a(1) = 1;
    BeamformingSolution w(2, 2, inst.config.antennas);
    w.at(0, 0) << 1.0, 0.0;
    const auto ref = check_ref_constraints(s, w, inst.channels, inst.config);
    CHECK(has_id(ref, "fronthaul_activity"));
    CHECK(has_id(ref, "power"));
    CHECK(has_id(ref, "qos_cone"));

    const auto pri = check_pri_constraints(s, w, inst.channels, inst.config);
    CHECK(has_id(pri, "activity_link"));
    CHECK(has_id(pri, "beam_link"));  // b = 1 at (1,1) with a zero beamformer
    CHECK(has_id(pri, "sinr"));

    NetworkState crowded = NetworkState::from_association(Eigen::MatrixXi::Ones(2, 2));
    auto one_link = inst.config;
    one_link.fronthaul_caps = {1, 1};
    CHECK(has_id(check_pri_constraints(crowded, w, inst.channels, one_link), "fronthaul"));
    crowded.b(0, 1) = 2;
    CHECK(has_id(check_ref_constraints(crowded, w, inst.channels, inst.config), "binary"));
}

TEST_CASE("relaxation bounds the enumerated optimum")
{
    for (std::uint64_t seed = 20; seed <= 26; ++seed)
    {
        const auto inst = make_instance(seed, 2, 3, 2, 2, 2.0);
        const auto ref = enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kRef);
        const auto relaxed = solve_relaxed_problem(inst.channels, inst.params, inst.config, {});
        if (!ref.feasible)
            continue;
        REQUIRE(relaxed.feasible());
        CHECK(relaxed.objective <= ref.value + 1e-6);
    }
}

TEST_CASE("relabeling the RRHs leaves the optimum unchanged")
{
    const auto inst = make_instance(cran::testing::feasible_seed(50, 3, 2, 2, 2, 0.0, Eigen::MatrixXi::Ones(3, 2)), 3,
                                    2, 2, 2, 0.0);
    const auto base = enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kRef);
    REQUIRE(base.feasible);

    const std::vector<std::size_t> perm{2, 0, 1};
    ChannelRealization ch = inst.channels;
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t k = 0; k < 2; ++k)
            ch.at(perm[l], k) = inst.channels.at(l, k);
    const auto moved = enumerate_optimal(ch, inst.params, inst.config, OracleObjective::kRef);
    REQUIRE(moved.feasible);
    CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-7));
    for (std::size_t l = 0; l < 3; ++l)
        CHECK(moved.state.a(Eigen::Index(perm[l])) == base.state.a(Eigen::Index(l)));
}

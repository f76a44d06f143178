// SPDX-License-Identifier: Apache-2.0

#include "cran/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cran {

OracleLimitError::OracleLimitError(std::size_t pairs)
    : std::invalid_argument("oracle: L*K = " + std::to_string(pairs) + " exceeds the enumeration limit of " +
                            std::to_string(kOracleMaxPairs))
{
}

std::string ConstraintViolation::describe() const
{
    std::ostringstream os;
    os << id;
    if (rrh >= 0)
        os << " rrh=" << rrh;
    if (user >= 0)
        os << " user=" << user;
    os << " by " << amount;
    return os.str();
}

std::string to_string(Verdict verdict)
{
    switch (verdict)
    {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kVacuous: return "vacuous";
    }
    return "?";
}

namespace {

void check_guard(const NetworkConfig &config)
{
    const std::size_t pairs = config.num_rrhs * config.num_users;
    if (pairs > kOracleMaxPairs)
        throw OracleLimitError(pairs);
}

bool every_pair_carries_power(const NetworkState &state, const BeamformingSolution &beams,
                              const NetworkConfig &config)
{
    for (std::size_t l = 0; l < config.num_rrhs; ++l)
        for (std::size_t k = 0; k < config.num_users; ++k)
            if (state.b(Eigen::Index(l), Eigen::Index(k)) == 1 && is_zero_beamformer(beams.at(l, k), config.p_max_w[l]))
                return false;
    return true;
}

void offer(OracleResult &best, double value, const NetworkState &state, const FixedSolve &solve)
{
    if (best.feasible && !(value < best.value))
        return;
    best.feasible = true;
    best.value = value;
    best.state = state;
    best.beams = solve.beams;
    best.power = solve.power;
    best.objective_ref = solve.objective_ref;
}

// Solves every admissible association once and feeds both selections.
void enumerate(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
               const SolverSettings &settings, const ConicBackend &backend, OracleResult *pri, OracleResult *ref)
{
    config.validate();
    params.validate(config.num_rrhs);
    channels.validate(config);
    check_guard(config);

    const std::size_t L = config.num_rrhs;
    const std::size_t K = config.num_users;
    const std::uint32_t count = 1u << (L * K);
    int configurations = 0;
    int failures = 0;
    for (std::uint32_t mask = 0; mask < count; ++mask)
    {
        Eigen::MatrixXi b = Eigen::MatrixXi::Zero(Eigen::Index(L), Eigen::Index(K));
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t k = 0; k < K; ++k)
                b(Eigen::Index(l), Eigen::Index(k)) = int((mask >> (l * K + k)) & 1u);

        bool admissible = true;
        for (std::size_t l = 0; l < L && admissible; ++l)
            admissible = b.row(Eigen::Index(l)).sum() <= config.fronthaul_caps[l];
        // An unserved user has no signal term at all.
        for (std::size_t k = 0; k < K && admissible; ++k)
            admissible = b.col(Eigen::Index(k)).sum() > 0;
        if (!admissible)
            continue;

        const NetworkState state = NetworkState::from_association(b);
        const FixedSolve solve = solve_fixed_problem(state, channels, params, config, settings, backend);
        ++configurations;
        if (solve.status == SolveStatus::kNumericalFailure)
            ++failures;
        if (!solve.feasible())
            continue;
        if (ref)
            offer(*ref, solve.objective_ref, state, solve);
        if (pri && every_pair_carries_power(state, solve.beams, config))
            offer(*pri, solve.power, state, solve);
    }
    for (OracleResult *r : {pri, ref})
        if (r)
        {
            r->configurations = configurations;
            r->numerical_failures = failures;
        }
}

double slack(double scale, double tol) { return tol * std::max(1.0, scale); }

void check_binary(const NetworkState &state, std::vector<ConstraintViolation> &out)
{
    for (Eigen::Index l = 0; l < state.a.size(); ++l)
    {
        if (state.a(l) != 0 && state.a(l) != 1)
            out.push_back({"binary", int(l), -1, double(state.a(l))});
        for (Eigen::Index k = 0; k < state.b.cols(); ++k)
            if (state.b(l, k) != 0 && state.b(l, k) != 1)
                out.push_back({"binary", int(l), int(k), double(state.b(l, k))});
    }
}

void check_dimensions(const NetworkState &state, const BeamformingSolution &beams, const NetworkConfig &config)
{
    if (std::size_t(state.a.size()) != config.num_rrhs || std::size_t(state.b.rows()) != config.num_rrhs ||
        std::size_t(state.b.cols()) != config.num_users)
        throw DimensionError("state does not match the configuration");
    if (beams.w.size() != config.num_rrhs * config.num_users)
        throw DimensionError("beamformer count does not match the configuration");
}

void check_power(const BeamformingSolution &beams, const NetworkConfig &config, const Eigen::VectorXi *activity,
                 double tol, std::vector<ConstraintViolation> &out)
{
    for (std::size_t l = 0; l < config.num_rrhs; ++l)
    {
        const double budget = config.p_max_w[l] * (activity ? (*activity)(Eigen::Index(l)) : 1);
        const double used = beams.rrh_transmit_power(l);
        if (used > budget + slack(config.p_max_w[l], tol))
            out.push_back({"power", int(l), -1, used - budget});
    }
}

}  // namespace

OracleResult enumerate_optimal(const ChannelRealization &channels, const PowerParams &params,
                               const NetworkConfig &config, OracleObjective objective,
                               const SolverSettings &settings, const ConicBackend &backend)
{
    OracleResult out;
    if (objective == OracleObjective::kPri)
        enumerate(channels, params, config, settings, backend, &out, nullptr);
    else
        enumerate(channels, params, config, settings, backend, nullptr, &out);
    return out;
}

std::vector<ConstraintViolation> check_pri_constraints(const NetworkState &state, const BeamformingSolution &beams,
                                                       const ChannelRealization &channels,
                                                       const NetworkConfig &config, double tol)
{
    check_dimensions(state, beams, config);
    std::vector<ConstraintViolation> out;
    for (std::size_t k = 0; k < config.num_users; ++k)
    {
        const double s = sinr(channels, beams, k);
        const double target = config.target_sinr[k];
        if (s < target - slack(target, tol))
            out.push_back({"sinr", -1, int(k), target - s});
    }
    check_power(beams, config, nullptr, tol, out);
    for (std::size_t l = 0; l < config.num_rrhs; ++l)
    {
        const Eigen::Index li = Eigen::Index(l);
        const int links = state.b.row(li).sum();
        if (links > config.fronthaul_caps[l])
            out.push_back({"fronthaul", int(l), -1, double(links - config.fronthaul_caps[l])});
        if ((state.a(li) == 0) != (links == 0))
            out.push_back({"activity_link", int(l), -1, double(links)});
        for (std::size_t k = 0; k < config.num_users; ++k)
        {
            const bool zero = is_zero_beamformer(beams.at(l, k), config.p_max_w[l]);
            if ((state.b(li, Eigen::Index(k)) == 0) != zero)
                out.push_back({"beam_link", int(l), int(k), beams.at(l, k).norm()});
        }
    }
    check_binary(state, out);
    return out;
}

std::vector<ConstraintViolation> check_ref_constraints(const NetworkState &state, const BeamformingSolution &beams,
                                                       const ChannelRealization &channels,
                                                       const NetworkConfig &config, double tol)
{
    check_dimensions(state, beams, config);
    const std::size_t L = config.num_rrhs;
    const std::size_t K = config.num_users;
    std::vector<ConstraintViolation> out;
    for (std::size_t k = 0; k < K; ++k)
    {
        const double sigma2 = channels.noise_power_w[k];
        double interference = sigma2;
        std::complex<double> signal = 0.0;
        for (std::size_t i = 0; i < K; ++i)
        {
            std::complex<double> v = 0.0;
            for (std::size_t l = 0; l < L; ++l)
                v += channels.at(l, k).dot(beams.at(l, i));
            if (i == k)
                signal = v;
            else
                interference += std::norm(v);
        }
        // Compared in units of the noise amplitude.
        const double sigma = std::sqrt(sigma2);
        const double lhs = std::sqrt(interference) / sigma;
        const double rhs = signal.real() / std::sqrt(config.target_sinr[k]) / sigma;
        if (lhs > rhs + slack(lhs, tol))
            out.push_back({"qos_cone", -1, int(k), lhs - rhs});
        const double phase = std::abs(signal.imag()) / sigma;
        if (phase > slack(std::abs(signal) / sigma, tol))
            out.push_back({"qos_phase", -1, int(k), phase});
    }
    check_power(beams, config, &state.a, tol, out);
    for (std::size_t l = 0; l < L; ++l)
    {
        const Eigen::Index li = Eigen::Index(l);
        const int links = state.b.row(li).sum();
        const int room = state.a(li) * config.fronthaul_caps[l];
        if (links > room)
            out.push_back({"fronthaul_activity", int(l), -1, double(links - room)});
        for (std::size_t k = 0; k < K; ++k)
        {
            const double cap = state.b(li, Eigen::Index(k)) * std::sqrt(config.p_max_w[l]);
            const double norm = beams.at(l, k).norm();
            if (norm > cap + slack(std::sqrt(config.p_max_w[l]), tol))
                out.push_back({"beam_coupling", int(l), int(k), norm - cap});
        }
    }
    check_binary(state, out);
    return out;
}

Certification certify(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                      const SolverSettings &settings, const ConicBackend &backend)
{
    Certification c;
    enumerate(channels, params, config, settings, backend, &c.pri, &c.ref);
    if (!c.pri.feasible || !c.ref.feasible)
    {
        c.gap = std::numeric_limits<double>::quiet_NaN();
        c.lemma1.verdict = Verdict::kVacuous;
        return c;
    }
    c.gap = c.ref.power - c.pri.power;
    c.lemma1.ref_optimum_in_pri = check_pri_constraints(c.ref.state, c.ref.beams, channels, config);
    c.lemma1.pri_optimum_in_ref = check_ref_constraints(c.pri.state, c.pri.beams, channels, config);
    c.lemma1.verdict = c.lemma1.ref_optimum_in_pri.empty() && c.lemma1.pri_optimum_in_ref.empty() ? Verdict::kPass
                                                                                                 : Verdict::kFail;
    return c;
}

Lemma1Report verify_lemma1(const ChannelRealization &channels, const PowerParams &params,
                           const NetworkConfig &config, const SolverSettings &settings,
                           const ConicBackend &backend)
{
    return certify(channels, params, config, settings, backend).lemma1;
}

double verify_theorem1(const ChannelRealization &channels, const PowerParams &params, const NetworkConfig &config,
                       const SolverSettings &settings, const ConicBackend &backend)
{
    const Certification c = certify(channels, params, config, settings, backend);
    if (!c.pri.feasible || !c.ref.feasible)
        throw std::runtime_error("verify_theorem1: no feasible association for this realization");
    return c.gap;
}

}  // namespace cran

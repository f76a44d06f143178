// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "cran/netmodel.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cran {

DimensionError::DimensionError(const std::string &what, std::ptrdiff_t rrh, std::ptrdiff_t user)
    : std::invalid_argument([&] {
          std::ostringstream os;
          os << what;
          if (rrh >= 0 || user >= 0)
              os << " at (l=" << rrh << ", k=" << user << ")";
          return os.str();
      }()),
      rrh_(rrh), user_(user)
{
}

NetworkConfig NetworkConfig::uniform(std::size_t num_rrhs, std::size_t num_users, int antennas, int fronthaul_cap,
                                     double p_max_w, double target_sinr, double zeta)
{
    NetworkConfig c;
    c.num_rrhs = num_rrhs;
    c.num_users = num_users;
    c.antennas.assign(num_rrhs, antennas);
    c.fronthaul_caps.assign(num_rrhs, fronthaul_cap);
    c.p_max_w.assign(num_rrhs, p_max_w);
    c.target_sinr.assign(num_users, target_sinr);
    c.zeta = zeta;
    return c;
}

void NetworkConfig::validate() const
{
    if (num_rrhs < 1 || num_users < 1)
        throw std::invalid_argument("network needs at least one RRH and one user");
    if (antennas.size() != num_rrhs || fronthaul_caps.size() != num_rrhs || p_max_w.size() != num_rrhs)
        throw DimensionError("per-RRH parameter lists must have length L");
    if (target_sinr.size() != num_users)
        throw DimensionError("target SINR list must have length K");
    for (std::size_t l = 0; l < num_rrhs; ++l)
    {
        if (antennas[l] < 1)
            throw std::invalid_argument("every RRH needs at least one antenna");
        if (fronthaul_caps[l] < 0)
            throw std::invalid_argument("fronthaul capacity must be nonnegative");
        if (!(p_max_w[l] > 0.0) || !std::isfinite(p_max_w[l]))
            throw std::invalid_argument("P^MAX must be positive and finite");
    }
    for (double g : target_sinr)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("target SINR must be positive and finite");
    if (!(zeta > 0.0) || !std::isfinite(zeta))
        throw std::invalid_argument("zeta must be positive");
}

int NetworkConfig::total_fronthaul() const
{
    return std::accumulate(fronthaul_caps.begin(), fronthaul_caps.end(), 0);
}

int NetworkConfig::total_antennas() const
{
    return std::accumulate(antennas.begin(), antennas.end(), 0);
}

PowerParams PowerParams::pico(std::size_t num_rrhs)
{
    return uniform(num_rrhs, 6.8, 4.3, 0.25);
}

PowerParams PowerParams::uniform(std::size_t num_rrhs, double p_cir_w, double p_slp_w, double eta)
{
    PowerParams p;
    p.p_cir_w.assign(num_rrhs, p_cir_w);
    p.p_slp_w.assign(num_rrhs, p_slp_w);
    p.eta.assign(num_rrhs, eta);
    return p;
}

std::vector<double> PowerParams::p_cms_w() const
{
    std::vector<double> out(p_cir_w.size());
    for (std::size_t l = 0; l < out.size(); ++l)
        out[l] = p_cms(l);
    return out;
}

double PowerParams::total_sleep_power() const
{
    return std::accumulate(p_slp_w.begin(), p_slp_w.end(), 0.0);
}

void PowerParams::validate(std::size_t num_rrhs) const
{
    if (p_cir_w.size() != num_rrhs || p_slp_w.size() != num_rrhs || eta.size() != num_rrhs)
        throw DimensionError("power parameter lists must have length L");
    for (std::size_t l = 0; l < num_rrhs; ++l)
    {
        if (!(p_slp_w[l] >= 0.0) || !(p_cir_w[l] >= p_slp_w[l]))
            throw std::invalid_argument("power model requires P^CIR >= P^SLP >= 0");
        if (!(eta[l] > 0.0) || eta[l] > 1.0)
            throw std::invalid_argument("amplifier efficiency must lie in (0, 1]");
    }
}

ChannelRealization::ChannelRealization(std::size_t num_rrhs_, std::size_t num_users_,
                                       const std::vector<int> &antennas, double noise)
    : num_rrhs(num_rrhs_), num_users(num_users_), h(num_rrhs_ * num_users_), noise_power_w(num_users_, noise)
{
    if (antennas.size() != num_rrhs)
        throw DimensionError("antenna list must have length L");
    for (std::size_t l = 0; l < num_rrhs; ++l)
        for (std::size_t k = 0; k < num_users; ++k)
            at(l, k) = Eigen::VectorXcd::Zero(antennas[l]);
}

void ChannelRealization::validate(const NetworkConfig &config) const
{
    if (num_rrhs != config.num_rrhs || num_users != config.num_users || h.size() != num_rrhs * num_users)
        throw DimensionError("channel realization does not match network size");
    if (noise_power_w.size() != num_users)
        throw DimensionError("noise power list must have length K");
    for (std::size_t l = 0; l < num_rrhs; ++l)
        for (std::size_t k = 0; k < num_users; ++k)
        {
            const auto &v = at(l, k);
            if (v.size() != config.antennas[l])
                throw DimensionError("channel vector length differs from N_l", l, k);
            if (!v.allFinite())
                throw std::invalid_argument("channel vector has non-finite entries");
        }
    for (double s : noise_power_w)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("noise power must be positive");
}

NetworkState::NetworkState(std::size_t num_rrhs, std::size_t num_users)
    : a(Eigen::VectorXi::Zero(num_rrhs)), b(Eigen::MatrixXi::Zero(num_rrhs, num_users))
{
}

NetworkState NetworkState::from_association(const Eigen::MatrixXi &b)
{
    NetworkState s(b.rows(), b.cols());
    s.b = b;
    for (Eigen::Index l = 0; l < b.rows(); ++l)
        s.a(l) = b.row(l).maxCoeff() > 0 ? 1 : 0;
    return s;
}

BeamformingSolution::BeamformingSolution(std::size_t num_rrhs_, std::size_t num_users_,
                                         const std::vector<int> &antennas)
    : num_rrhs(num_rrhs_), num_users(num_users_), w(num_rrhs_ * num_users_), per_user_sinr(num_users_, 0.0)
{
    if (antennas.size() != num_rrhs)
        throw DimensionError("antenna list must have length L");
    for (std::size_t l = 0; l < num_rrhs; ++l)
        for (std::size_t k = 0; k < num_users; ++k)
            at(l, k) = Eigen::VectorXcd::Zero(antennas[l]);
}

double BeamformingSolution::rrh_transmit_power(std::size_t l) const
{
    double p = 0.0;
    for (std::size_t k = 0; k < num_users; ++k)
        p += at(l, k).squaredNorm();
    return p;
}

namespace {

void check_dims(const ChannelRealization &channels, const BeamformingSolution &solution)
{
    if (channels.num_rrhs != solution.num_rrhs || channels.num_users != solution.num_users)
        throw DimensionError("beamformer and channel sizes differ");
    for (std::size_t l = 0; l < channels.num_rrhs; ++l)
        for (std::size_t k = 0; k < channels.num_users; ++k)
            if (channels.at(l, k).size() != solution.at(l, k).size())
                throw DimensionError("beamformer length differs from channel length", l, k);
}

}  // namespace

double sinr(const ChannelRealization &channels, const BeamformingSolution &solution, std::size_t k)
{
    check_dims(channels, solution);
    if (k >= channels.num_users)
        throw DimensionError("user index out of range", -1, static_cast<std::ptrdiff_t>(k));

    double signal = 0.0, interference = 0.0;
    for (std::size_t i = 0; i < channels.num_users; ++i)
    {
        std::complex<double> y = 0.0;
        for (std::size_t l = 0; l < channels.num_rrhs; ++l)
            y += channels.at(l, k).dot(solution.at(l, i));  // dot() conjugates the first argument
        if (i == k)
            signal = std::norm(y);
        else
            interference += std::norm(y);
    }
    return signal / (interference + channels.noise_power_w[k]);
}

std::vector<double> all_sinrs(const ChannelRealization &channels, const BeamformingSolution &solution)
{
    std::vector<double> out(channels.num_users);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = sinr(channels, solution, k);
    return out;
}

double network_power(const NetworkState &state, const BeamformingSolution &solution, const PowerParams &params)
{
    double f = 0.0;
    for (std::size_t l = 0; l < solution.num_rrhs; ++l)
        f += state.a(l) * params.p_cms(l) + solution.rrh_transmit_power(l) / params.eta[l];
    return f;
}

double objective_ref(const NetworkState &state, const BeamformingSolution &solution, const PowerParams &params,
                     const NetworkConfig &config)
{
    const double weight = config.zeta / static_cast<double>(config.num_rrhs * config.num_users);
    return network_power(state, solution, params) + weight * state.association_count();
}

std::string StateViolation::describe() const
{
    std::ostringstream os;
    switch (kind)
    {
    case ViolationKind::kInactiveButAssociated: os << "inactive RRH has associated users"; break;
    case ViolationKind::kActiveButIdle: os << "active RRH serves no user"; break;
    case ViolationKind::kFronthaulExceeded: os << "fronthaul link count exceeds capacity"; break;
    case ViolationKind::kNonBinary: os << "non-binary flag"; break;
    }
    os << " (l=" << rrh << ")";
    return os.str();
}

std::vector<StateViolation> validate_state(const NetworkState &state, const NetworkConfig &config,
                                           const ValidationOptions &options)
{
    const auto L = static_cast<Eigen::Index>(config.num_rrhs);
    const auto K = static_cast<Eigen::Index>(config.num_users);
    if (state.a.size() != L || state.b.rows() != L || state.b.cols() != K)
        throw DimensionError("network state does not match network size");

    std::vector<StateViolation> out;
    for (Eigen::Index l = 0; l < L; ++l)
    {
        const auto lu = static_cast<std::size_t>(l);
        bool binary = state.a(l) == 0 || state.a(l) == 1;
        for (Eigen::Index k = 0; k < K; ++k)
            binary = binary && (state.b(l, k) == 0 || state.b(l, k) == 1);
        if (!binary)
        {
            out.push_back({ViolationKind::kNonBinary, lu});
            continue;
        }
        const int links = state.b.row(l).sum();
        if (state.a(l) == 0 && links > 0)
            out.push_back({ViolationKind::kInactiveButAssociated, lu});
        if (state.a(l) == 1 && links == 0 && !options.allow_idle_active)
            out.push_back({ViolationKind::kActiveButIdle, lu});
        if (links > config.fronthaul_caps[lu])
            out.push_back({ViolationKind::kFronthaulExceeded, lu});
    }
    return out;
}

bool is_zero_beamformer(const Eigen::VectorXcd &w, double p_max_w)
{
    return w.norm() <= kZeroBeamformerRelTol * std::sqrt(p_max_w);
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

}  // namespace cran

// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "cran/socp_form.hpp"

#include <cmath>
#include <sstream>

namespace cran {

using Eigen::Index;

Index VariableLayout::add(const VariableKey &key)
{
    const auto [it, inserted] = index_.emplace(key, size());
    if (!inserted)
        throw std::logic_error("variable added twice to layout");
    keys_.push_back(key);
    return it->second;
}

std::optional<Index> VariableLayout::find(const VariableKey &key) const
{
    const auto it = index_.find(key);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

Index VariableLayout::column(const VariableKey &key) const
{
    const auto c = find(key);
    if (!c)
        throw std::out_of_range("variable not present in layout");
    return *c;
}

VariableLayout VariableLayout::permuted(const std::vector<Index> &permutation) const
{
    if (permutation.size() != keys_.size())
        throw std::invalid_argument("permutation length differs from layout size");
    std::vector<VariableKey> keys(keys_.size());
    std::vector<bool> seen(keys_.size(), false);
    for (std::size_t j = 0; j < keys_.size(); ++j)
    {
        const auto dst = static_cast<std::size_t>(permutation[j]);
        if (dst >= keys_.size() || seen[dst])
            throw std::invalid_argument("not a permutation");
        seen[dst] = true;
        keys[dst] = keys_[j];
    }
    VariableLayout out;
    for (const auto &k : keys)
        out.add(k);
    return out;
}

namespace {

/// Accumulates cone rows in the convention s = b - A x.
class RowBuilder {
public:
    Index row() const { return next_row_; }

    /// Starts a new cone of the given kind; rows are appended with add_row.
    void open(ConeKind kind) { cones_.push_back({kind, 0}); }

    /// Appends a row with value s = offset + sum coeff_j x_j.
    Index add_row(double offset, const std::vector<std::pair<Index, double>> &terms)
    {
        const Index r = next_row_++;
        for (const auto &[col, coeff] : terms)
            if (coeff != 0.0)
                triplets_.emplace_back(r, col, -coeff);
        offsets_.push_back(offset);
        cones_.back().size += 1;
        return r;
    }

    ConicProblem finish(Eigen::VectorXd c)
    {
        ConicProblem p;
        p.c = std::move(c);
        p.A.resize(next_row_, p.c.size());
        p.A.setFromTriplets(triplets_.begin(), triplets_.end());
        p.b = Eigen::Map<const Eigen::VectorXd>(offsets_.data(), static_cast<Index>(offsets_.size()));
        p.cones = cones_;
        return p;
    }

private:
    Index next_row_ = 0;
    std::vector<Eigen::Triplet<double>> triplets_;
    std::vector<double> offsets_;
    std::vector<Cone> cones_;
};

using Terms = std::vector<std::pair<Index, double>>;

struct BeamColumns {
    // re/im column of antenna n for pair (l,k), or -1 when the pair is eliminated
    std::vector<std::vector<Index>> re;
    std::vector<std::vector<Index>> im;
};

/// Adds w columns for every pair where served(l,k) is true, RRH-major.
BeamColumns add_beam_columns(VariableLayout &layout, const NetworkConfig &config,
                             const Eigen::MatrixXi &served)
{
    const std::size_t L = config.num_rrhs, K = config.num_users;
    BeamColumns cols;
    cols.re.assign(L * K, {});
    cols.im.assign(L * K, {});
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < K; ++k)
        {
            if (!served(static_cast<Index>(l), static_cast<Index>(k)))
                continue;
            const int N = config.antennas[l];
            auto &re = cols.re[l * K + k];
            auto &im = cols.im[l * K + k];
            for (int n = 0; n < N; ++n)
                re.push_back(layout.add({VariableKind::kBeamReal, int(l), int(k), n}));
            for (int n = 0; n < N; ++n)
                im.push_back(layout.add({VariableKind::kBeamImag, int(l), int(k), n}));
        }
    return cols;
}

/// Terms of Re{h^H w} and Im{h^H w} / sigma for one pair's columns.
void inner_product_terms(const Eigen::VectorXcd &h, double inv_sigma, const std::vector<Index> &re,
                         const std::vector<Index> &im, Terms &real_part, Terms &imag_part)
{
    for (std::size_t n = 0; n < re.size(); ++n)
    {
        const double hr = h(static_cast<Index>(n)).real() * inv_sigma;
        const double hi = h(static_cast<Index>(n)).imag() * inv_sigma;
        real_part.emplace_back(re[n], hr);
        real_part.emplace_back(im[n], hi);
        imag_part.emplace_back(im[n], hr);
        imag_part.emplace_back(re[n], -hi);
    }
}

/// Emits the epigraph, QoS, phase and per-RRH power cones shared by both builders.
void add_common_cones(RowBuilder &rows, const NetworkConfig &config, const ChannelRealization &channels,
                      const BeamColumns &beams, const std::vector<Index> &epigraph,
                      const std::vector<double> &power_budget)
{
    const std::size_t L = config.num_rrhs, K = config.num_users;

    for (std::size_t l = 0; l < L; ++l)
    {
        if (epigraph[l] < 0)
            continue;
        rows.open(ConeKind::kSecondOrder);
        rows.add_row(1.0, {{epigraph[l], 1.0}});
        for (std::size_t k = 0; k < K; ++k)
        {
            for (Index c : beams.re[l * K + k])
                rows.add_row(0.0, {{c, 2.0}});
            for (Index c : beams.im[l * K + k])
                rows.add_row(0.0, {{c, 2.0}});
        }
        rows.add_row(-1.0, {{epigraph[l], 1.0}});
    }

    std::vector<Terms> phase_rows(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const double inv_sigma = 1.0 / std::sqrt(channels.noise_power_w[k]);
        const double inv_sqrt_gamma = 1.0 / std::sqrt(config.target_sinr[k]);
        rows.open(ConeKind::kSecondOrder);

        Terms signal, phase;
        for (std::size_t l = 0; l < L; ++l)
            inner_product_terms(channels.at(l, k), inv_sigma, beams.re[l * K + k], beams.im[l * K + k], signal,
                                phase);
        for (auto &t : signal)
            t.second *= inv_sqrt_gamma;
        rows.add_row(0.0, signal);

        for (std::size_t i = 0; i < K; ++i)
        {
            if (i == k)
                continue;
            Terms re_part, im_part;
            for (std::size_t l = 0; l < L; ++l)
                inner_product_terms(channels.at(l, k), inv_sigma, beams.re[l * K + i], beams.im[l * K + i],
                                    re_part, im_part);
            rows.add_row(0.0, re_part);
            rows.add_row(0.0, im_part);
        }
        rows.add_row(1.0, {});
        phase_rows[k] = std::move(phase);
    }

    for (std::size_t k = 0; k < K; ++k)
    {
        rows.open(ConeKind::kZero);
        rows.add_row(0.0, phase_rows[k]);
    }

    for (std::size_t l = 0; l < L; ++l)
    {
        if (epigraph[l] < 0)
            continue;
        rows.open(ConeKind::kSecondOrder);
        rows.add_row(std::sqrt(power_budget[l]), {});
        for (std::size_t k = 0; k < K; ++k)
        {
            for (Index c : beams.re[l * K + k])
                rows.add_row(0.0, {{c, 1.0}});
            for (Index c : beams.im[l * K + k])
                rows.add_row(0.0, {{c, 1.0}});
        }
    }
}

}  // namespace

SocpInstance build_fixed_problem(const NetworkState &state, const ChannelRealization &channels,
                                 const PowerParams &params, const NetworkConfig &config,
                                 const ValidationOptions &options)
{
    config.validate();
    params.validate(config.num_rrhs);
    channels.validate(config);
    const auto violations = validate_state(state, config, options);
    if (!violations.empty())
        throw std::invalid_argument("fixed problem needs a consistent state: " + violations.front().describe());

    const std::size_t L = config.num_rrhs, K = config.num_users;
    SocpInstance inst;
    const BeamColumns beams = add_beam_columns(inst.layout, config, state.b);

    std::vector<Index> epigraph(L, -1);
    for (std::size_t l = 0; l < L; ++l)
        if (state.b.row(static_cast<Index>(l)).sum() > 0)
            epigraph[l] = inst.layout.add({VariableKind::kEpigraph, int(l)});

    Eigen::VectorXd c = Eigen::VectorXd::Zero(inst.layout.size());
    for (std::size_t l = 0; l < L; ++l)
        if (epigraph[l] >= 0)
            c(epigraph[l]) = 1.0 / params.eta[l];

    std::vector<double> budget(L);
    for (std::size_t l = 0; l < L; ++l)
        budget[l] = state.a(static_cast<Index>(l)) * config.p_max_w[l];

    RowBuilder rows;
    add_common_cones(rows, config, channels, beams, epigraph, budget);
    inst.problem = rows.finish(std::move(c));

    const double weight = config.zeta / static_cast<double>(L * K);
    for (std::size_t l = 0; l < L; ++l)
        inst.objective_constant += state.a(static_cast<Index>(l)) * params.p_cms(l);
    inst.objective_constant += weight * state.association_count();
    for (std::size_t k = 0; k < K; ++k)
        inst.trivially_infeasible = inst.trivially_infeasible || state.b.col(static_cast<Index>(k)).sum() == 0;
    return inst;
}

SocpInstance build_relaxed_problem(const ChannelRealization &channels, const PowerParams &params,
                                   const NetworkConfig &config)
{
    config.validate();
    params.validate(config.num_rrhs);
    channels.validate(config);

    const std::size_t L = config.num_rrhs, K = config.num_users;
    SocpInstance inst;
    const BeamColumns beams = add_beam_columns(inst.layout, config, Eigen::MatrixXi::Ones(L, K));

    std::vector<Index> epigraph(L), activity(L), association(L * K);
    for (std::size_t l = 0; l < L; ++l)
        epigraph[l] = inst.layout.add({VariableKind::kEpigraph, int(l)});
    for (std::size_t l = 0; l < L; ++l)
        activity[l] = inst.layout.add({VariableKind::kActivity, int(l)});
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < K; ++k)
            association[l * K + k] = inst.layout.add({VariableKind::kAssociation, int(l), int(k)});

    const double weight = config.zeta / static_cast<double>(L * K);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(inst.layout.size());
    for (std::size_t l = 0; l < L; ++l)
    {
        c(epigraph[l]) = 1.0 / params.eta[l];
        c(activity[l]) = params.p_cms(l);
        for (std::size_t k = 0; k < K; ++k)
            c(association[l * K + k]) = weight;
    }

    RowBuilder rows;
    add_common_cones(rows, config, channels, beams, epigraph, config.p_max_w);

    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < K; ++k)
        {
            rows.open(ConeKind::kSecondOrder);
            rows.add_row(0.0, {{association[l * K + k], std::sqrt(config.p_max_w[l])}});
            for (Index col : beams.re[l * K + k])
                rows.add_row(0.0, {{col, 1.0}});
            for (Index col : beams.im[l * K + k])
                rows.add_row(0.0, {{col, 1.0}});
        }

    rows.open(ConeKind::kNonnegative);
    for (std::size_t l = 0; l < L; ++l)
    {
        Terms t{{activity[l], static_cast<double>(config.fronthaul_caps[l])}};
        for (std::size_t k = 0; k < K; ++k)
            t.emplace_back(association[l * K + k], -1.0);
        rows.add_row(0.0, t);
    }

    rows.open(ConeKind::kNonnegative);
    auto add_box = [&](Index col) {
        rows.add_row(0.0, {{col, 1.0}});
        rows.add_row(1.0, {{col, -1.0}});
    };
    for (std::size_t l = 0; l < L; ++l)
        add_box(activity[l]);
    for (Index col : association)
        add_box(col);

    inst.problem = rows.finish(std::move(c));
    return inst;
}

SocpInstance permute_columns(const SocpInstance &instance, const std::vector<Index> &permutation)
{
    SocpInstance out = instance;
    out.layout = instance.layout.permuted(permutation);
    const Index n = instance.problem.num_variables();
    const auto &A = instance.problem.A;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (Index j = 0; j < n; ++j)
    {
        const Index dst = permutation[static_cast<std::size_t>(j)];
        out.problem.c(dst) = instance.problem.c(j);
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, j); it; ++it)
            triplets.emplace_back(it.row(), dst, it.value());
    }
    out.problem.A.setZero();
    out.problem.A.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

SolveError::SolveError(SolveStatus status)
    : std::runtime_error("conic solve did not reach optimality: " + to_string(status)), status_(status)
{
}

BeamformingSolution extract_beamformers(const ConicSolution &solution, const SocpInstance &instance,
                                        const NetworkState &state, const ChannelRealization &channels)
{
    if (solution.status != SolveStatus::kOptimal)
        throw SolveError(solution.status);
    if (solution.primal.size() != instance.layout.size())
        throw DimensionError("conic solution length differs from the variable layout");

    const std::size_t L = channels.num_rrhs, K = channels.num_users;
    std::vector<int> antennas(L);
    for (std::size_t l = 0; l < L; ++l)
        antennas[l] = static_cast<int>(channels.at(l, 0).size());
    BeamformingSolution out(L, K, antennas);

    for (Index j = 0; j < instance.layout.size(); ++j)
    {
        const auto &key = instance.layout.key(j);
        if (key.kind != VariableKind::kBeamReal && key.kind != VariableKind::kBeamImag)
            continue;
        const auto l = static_cast<std::size_t>(key.rrh), k = static_cast<std::size_t>(key.user);
        if (state.b.size() > 0 && state.b(key.rrh, key.user) == 0)
            throw std::invalid_argument("layout carries a beamformer for an unassociated pair");
        auto &entry = out.at(l, k)(key.antenna);
        if (key.kind == VariableKind::kBeamReal)
            entry.real(solution.primal(j));
        else
            entry.imag(solution.primal(j));
    }
    out.objective_value = solution.objective + instance.objective_constant;
    out.per_user_sinr = all_sinrs(channels, out);
    out.feasible = true;
    return out;
}

RelaxedFlags extract_relaxed_flags(const ConicSolution &solution, const VariableLayout &layout,
                                   std::size_t num_rrhs, std::size_t num_users)
{
    RelaxedFlags f{Eigen::VectorXd::Zero(num_rrhs), Eigen::MatrixXd::Zero(num_rrhs, num_users)};
    for (Index j = 0; j < layout.size(); ++j)
    {
        const auto &key = layout.key(j);
        if (key.kind == VariableKind::kActivity)
            f.a(key.rrh) = solution.primal(j);
        else if (key.kind == VariableKind::kAssociation)
            f.b(key.rrh, key.user) = solution.primal(j);
    }
    return f;
}

FixedSolve solve_fixed_problem(const NetworkState &state, const ChannelRealization &channels,
                               const PowerParams &params, const NetworkConfig &config,
                               const SolverSettings &settings, const ConicBackend &backend,
                               const ValidationOptions &options)
{
    const SocpInstance inst = build_fixed_problem(state, channels, params, config, options);
    const ConicSolution sol = backend.solve(inst.problem, settings);
    FixedSolve out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    if (sol.status != SolveStatus::kOptimal)
        return out;
    out.beams = extract_beamformers(sol, inst, state, channels);
    out.objective_ref = out.beams.objective_value;
    out.power = network_power(state, out.beams, params);
    return out;
}

RelaxedSolve solve_relaxed_problem(const ChannelRealization &channels, const PowerParams &params,
                                   const NetworkConfig &config, const SolverSettings &settings,
                                   const ConicBackend &backend)
{
    const SocpInstance inst = build_relaxed_problem(channels, params, config);
    const ConicSolution sol = backend.solve(inst.problem, settings);
    RelaxedSolve out;
    out.status = sol.status;
    if (sol.status != SolveStatus::kOptimal)
        return out;
    out.beams = extract_beamformers(sol, inst, NetworkState{}, channels);
    out.flags = extract_relaxed_flags(sol, inst.layout, config.num_rrhs, config.num_users);
    out.objective = sol.objective;
    return out;
}

}  // namespace cran

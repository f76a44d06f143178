// SPDX-License-Identifier: Apache-2.0
//
// cran_exp: sweeps, certification and single-instance inspection.
//
// Exit status: 0 success, 2 configuration error, 3 verification failure.
// ------------------------------------------------------------------------

#include "cran/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace cran;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string summary_path;
    std::string seeds;
    bool paper_scale = false;
    int workers = 0;
    double solver_tol = 0.0;
    bool no_timing = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("--config", o.config_path, "JSON experiment file");
    cmd->add_option("--out", o.out_path, "output path (stdout when omitted)");
    cmd->add_option("--seeds", o.seeds, "seed list, e.g. 1-20 or 3,5,8");
    cmd->add_flag("--paper-scale", o.paper_scale, "L = 10, K in {10, 15}, 100 seeds");
    cmd->add_option("--workers", o.workers, "parallel workers")->check(CLI::PositiveNumber);
    cmd->add_option("--solver-tol", o.solver_tol, "feasibility and optimality tolerance")
        ->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(ExperimentConfig base, const Options &o)
{
    if (!o.config_path.empty())
        base = load_config(o.config_path, std::move(base));
    if (!o.seeds.empty())
        base.seeds = parse_seed_list(o.seeds);
    if (o.workers > 0)
        base.workers = o.workers;
    if (o.solver_tol > 0.0)
        base.solver.feasibility_tol = base.solver.optimality_tol = o.solver_tol;
    if (o.no_timing)
        base.record_wall_time = false;
    base.validate();
    return base;
}

// Keeps the stream alive for the caller; stdout when path is empty.
std::ostream &open_out(const std::string &path, std::unique_ptr<std::ofstream> &holder)
{
    if (path.empty())
        return std::cout;
    holder = std::make_unique<std::ofstream>(path);
    if (!*holder)
        throw ConfigError("cannot write " + path);
    return *holder;
}

int run_sweep_command(const ExperimentConfig &base, const Options &o)
{
    const ExperimentConfig e = resolve(base, o);
    const auto rows = run_sweep(e);
    std::unique_ptr<std::ofstream> file;
    write_rows_csv(open_out(o.out_path, file), rows);
    if (!o.summary_path.empty())
    {
        std::unique_ptr<std::ofstream> sfile;
        write_summary_csv(open_out(o.summary_path, sfile), summarize(rows));
    }
    return 0;
}

int run_verify(const Options &o)
{
    const ExperimentConfig e = resolve(ExperimentConfig::certification(), o);
    const auto rows = run_certification(e);

    std::unique_ptr<std::ofstream> file;
    std::ostream &os = open_out(o.out_path, file);
    os << "seed,feasible,gap,cross_feasibility,relaxed_status,relaxed_objective,ref_optimum,pri_optimum,"
          "inflation_feasible,inflation_power,inflation_solves,solve_budget,state_valid,ok\n";
    int feasible = 0, failures = 0, matched = 0;
    for (const CertificationRow &r : rows)
    {
        bool ok = r.inflation_solves <= r.solve_budget && r.inflation_state_valid;
        if (r.feasible)
        {
            ++feasible;
            ok = ok && r.gap >= -1e-6 && r.gap <= e.zeta && r.lemma1 == Verdict::kPass &&
                 r.relaxed_status == SolveStatus::kOptimal && r.relaxed_objective <= r.ref_optimum + 1e-6;
            if (r.inflation_feasible)
            {
                ok = ok && r.inflation_power >= r.pri_optimum - 1e-6;
                matched += std::abs(r.inflation_power - r.pri_optimum) <= 1e-4;
            }
        }
        failures += !ok;
        char buf[512];
        std::snprintf(buf, sizeof buf, "%llu,%d,%.9g,%s,%s,%.9g,%.9g,%.9g,%d,%.9g,%d,%d,%d,%d\n",
                      static_cast<unsigned long long>(r.seed), int(r.feasible), r.gap, to_string(r.lemma1).c_str(),
                      to_string(r.relaxed_status).c_str(), r.relaxed_objective, r.ref_optimum, r.pri_optimum,
                      int(r.inflation_feasible), r.inflation_power, r.inflation_solves, r.solve_budget,
                      int(r.inflation_state_valid), int(ok));
        os << buf;
        for (const ConstraintViolation &v : r.violations)
            std::cerr << "seed " << r.seed << ": " << v.describe() << '\n';
    }
    std::cerr << feasible << " of " << rows.size() << " instances feasible, " << failures << " failing, inflation "
              << "matched the optimum on " << matched << '\n';
    return failures ? kExitVerify : 0;
}

nlohmann::json describe(const OracleResult &r, const NetworkConfig &c)
{
    nlohmann::json j;
    j["feasible"] = r.feasible;
    j["configurations"] = r.configurations;
    if (!r.feasible)
        return j;
    j["F"] = r.power;
    j["F_hat"] = r.objective_ref;
    std::vector<int> a(r.state.a.data(), r.state.a.data() + r.state.a.size());
    std::vector<std::vector<int>> b(c.num_rrhs);
    for (std::size_t l = 0; l < c.num_rrhs; ++l)
        for (std::size_t k = 0; k < c.num_users; ++k)
            b[l].push_back(r.state.b(Eigen::Index(l), Eigen::Index(k)));
    j["a"] = a;
    j["b"] = b;
    j["sinr"] = r.beams.per_user_sinr;
    return j;
}

std::uint64_t chosen_seed(const ExperimentConfig &e, const Options &o)
{
    return o.seed_set ? o.seed : e.seeds.front();
}

int run_oracle(const Options &o)
{
    const ExperimentConfig e = resolve(ExperimentConfig::certification(), o);
    const std::uint64_t seed = chosen_seed(e, o);
    const auto inst = make_instance(e, seed, e.num_users.front(), e.gamma_db.front(), e.fronthaul.front());
    const Certification c = certify(inst.channels, inst.params, inst.config, e.solver);
    nlohmann::json j;
    j["seed"] = seed;
    j["pri"] = describe(c.pri, inst.config);
    j["ref"] = describe(c.ref, inst.config);
    if (std::isfinite(c.gap))
        j["gap"] = c.gap;
    j["lemma1"] = to_string(c.lemma1.verdict);
    std::unique_ptr<std::ofstream> file;
    open_out(o.out_path, file) << j.dump(2) << '\n';
    return c.lemma1.verdict == Verdict::kFail ? kExitVerify : 0;
}

int run_trace(const Options &o)
{
    const ExperimentConfig e = resolve(o.paper_scale ? ExperimentConfig::full_scale_sinr() : ExperimentConfig::desk_sinr(), o);
    const std::uint64_t seed = chosen_seed(e, o);
    const auto inst = make_instance(e, seed, e.num_users.front(), e.gamma_db.front(), e.fronthaul.front());
    const InflationResult r = inflate(inst.channels, inst.params, inst.config, e.solver, e.inflation);
    std::unique_ptr<std::ofstream> file;
    r.trace.write_csv(open_out(o.out_path, file));
    std::cerr << "feasible=" << r.feasible << " F=" << r.power << " solves=" << r.socp_solves() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Network power experiments for fronthaul-limited cloud RAN"};
    app.require_subcommand(1);
    Options o;

    auto *sinr = app.add_subcommand("sweep-sinr", "power and active RRHs versus target SINR");
    auto *front = app.add_subcommand("sweep-fronthaul", "power and active RRHs versus fronthaul capacity");
    for (auto *cmd : {sinr, front})
    {
        add_common(cmd, o);
        cmd->add_option("--summary", o.summary_path, "also write per-group means here");
        cmd->add_flag("--no-timing", o.no_timing, "write 0 for wall_time_ms");
    }
    auto *verify = app.add_subcommand("verify", "enumeration-based certification on small instances");
    add_common(verify, o);
    auto *oracle = app.add_subcommand("oracle", "enumerate one instance");
    auto *trace = app.add_subcommand("trace", "inflation trace of one instance");
    for (auto *cmd : {oracle, trace})
    {
        add_common(cmd, o);
        cmd->add_option("--seed", o.seed, "instance seed (first configured seed by default)");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    o.seed_set = oracle->count("--seed") + trace->count("--seed") > 0;

    try
    {
        if (*sinr)
            return run_sweep_command(o.paper_scale ? ExperimentConfig::full_scale_sinr() : ExperimentConfig::desk_sinr(), o);
        if (*front)
            return run_sweep_command(
                o.paper_scale ? ExperimentConfig::full_scale_fronthaul() : ExperimentConfig::desk_fronthaul(), o);
        if (*verify)
            return run_verify(o);
        if (*oracle)
            return run_oracle(o);
        if (*trace)
            return run_trace(o);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}

// SPDX-License-Identifier: Apache-2.0

#include "cran/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace cran {

using nlohmann::json;

std::string to_string(Algorithm algorithm)
{
    switch (algorithm)
    {
    case Algorithm::kInflation: return "inflation";
    case Algorithm::kLteA: return "lte_a";
    case Algorithm::kOracle: return "oracle";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "inflation")
        return Algorithm::kInflation;
    if (name == "lte_a")
        return Algorithm::kLteA;
    if (name == "oracle")
        return Algorithm::kOracle;
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<int> FronthaulPoint::caps(std::size_t num_rrhs) const
{
    if (!per_rrh.empty())
        return per_rrh;
    return std::vector<int>(num_rrhs, uniform);
}

std::string FronthaulPoint::label() const
{
    if (per_rrh.empty())
        return std::to_string(uniform);
    std::string out;
    for (std::size_t i = 0; i < per_rrh.size(); ++i)
        out += (i ? "/" : "") + std::to_string(per_rrh[i]);
    return out;
}

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const
{
    if (seeds.empty())
        throw ConfigError("seeds must not be empty");
    if (num_rrhs < 1)
        throw ConfigError("L must be at least 1");
    if (num_users.empty() || gamma_db.empty() || fronthaul.empty() || algorithms.empty())
        throw ConfigError("K, gamma_db, fronthaul_cap and algorithms must be nonempty");
    for (std::size_t k : num_users)
        if (k < 1)
            throw ConfigError("K must be at least 1");
    if (antennas < 1)
        throw ConfigError("antennas must be at least 1");
    for (const FronthaulPoint &f : fronthaul)
    {
        if (!f.per_rrh.empty() && f.per_rrh.size() != num_rrhs)
            throw ConfigError("per-RRH fronthaul list must have L entries");
        for (int c : f.caps(num_rrhs))
            if (c < 0)
                throw ConfigError("fronthaul capacity must be nonnegative");
    }
    for (double g : gamma_db)
        if (!std::isfinite(g))
            throw ConfigError("gamma_db must be finite");
    if (!(region_half_width_m > 0) || !(p_max_w > 0) || !(zeta > 0))
        throw ConfigError("region_half_width_m, p_max_w and zeta must be positive");
    if (!(p_cir_w >= p_slp_w) || !(p_slp_w >= 0) || !(eta > 0) || !(eta <= 1))
        throw ConfigError("power parameters need p_cir_w >= p_slp_w >= 0 and 0 < eta <= 1");
    if (workers < 1)
        throw ConfigError("workers must be at least 1");
    try
    {
        channel.validate();
        solver.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    const bool oracle = std::find(algorithms.begin(), algorithms.end(), Algorithm::kOracle) != algorithms.end();
    if (oracle)
        for (std::size_t k : num_users)
            if (num_rrhs * k > kOracleMaxPairs)
                throw ConfigError("oracle needs L*K <= " + std::to_string(kOracleMaxPairs));
}

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t count)
{
    std::vector<std::uint64_t> s(count);
    for (std::uint64_t i = 0; i < count; ++i)
        s[i] = first + i;
    return s;
}

std::vector<double> gamma_grid(double lo, double hi, double step)
{
    std::vector<double> g;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        g.push_back(lo + i * step);
    return g;
}

std::vector<FronthaulPoint> uniform_caps(int lo, int hi)
{
    std::vector<FronthaulPoint> f;
    for (int c = lo; c <= hi; ++c)
        f.push_back({c, {}});
    return f;
}

}  // namespace

ExperimentConfig ExperimentConfig::desk_sinr()
{
    ExperimentConfig c;
    c.seeds = seed_range(1, 20);
    c.num_users = {4, 6};
    c.fronthaul = {{4, {}}};
    c.gamma_db = gamma_grid(0.0, 10.0, 2.0);
    return c;
}

ExperimentConfig ExperimentConfig::desk_fronthaul()
{
    ExperimentConfig c = desk_sinr();
    c.fronthaul = uniform_caps(1, 6);
    c.gamma_db = {6.0};
    return c;
}

ExperimentConfig ExperimentConfig::full_scale_sinr()
{
    ExperimentConfig c;
    c.seeds = seed_range(1, 100);
    c.num_rrhs = 10;
    c.num_users = {10, 15};
    c.fronthaul = {{6, {}}};
    c.gamma_db = gamma_grid(0.0, 10.0, 2.0);
    return c;
}

ExperimentConfig ExperimentConfig::full_scale_fronthaul()
{
    ExperimentConfig c = full_scale_sinr();
    c.fronthaul = uniform_caps(1, 10);
    c.gamma_db = {6.0};
    return c;
}

ExperimentConfig ExperimentConfig::certification()
{
    ExperimentConfig c;
    c.seeds = seed_range(1, 50);
    c.num_rrhs = 3;
    c.num_users = {2};
    c.fronthaul = {{1, {}}};
    c.gamma_db = {0.0};
    c.algorithms = {Algorithm::kInflation, Algorithm::kLteA, Algorithm::kOracle};
    return c;
}

namespace {

template <class T>
T get_as(const json &j, const std::string &key)
{
    try
    {
        return j.get<T>();
    }
    catch (const json::exception &)
    {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

template <class T>
std::vector<T> scalar_or_list(const json &j, const std::string &key)
{
    if (j.is_array())
        return get_as<std::vector<T>>(j, key);
    return {get_as<T>(j, key)};
}

void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
{
    if (!j.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto &item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig c)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"seeds", "L", "K", "antennas", "fronthaul_cap", "gamma_db", "region_half_width_m", "p_max_w", "zeta",
                "channel", "power", "algorithms", "solver", "reversion", "workers", "record_wall_time"},
               "config");

    if (j.contains("seeds"))
    {
        const json &s = j["seeds"];
        if (s.is_object())
        {
            check_keys(s, {"first", "count"}, "seeds");
            c.seeds = seed_range(get_as<std::uint64_t>(s.value("first", json(1)), "seeds.first"),
                                 get_as<std::uint64_t>(s.at("count"), "seeds.count"));
        }
        else if (s.is_string())
            c.seeds = parse_seed_list(s.get<std::string>());
        else
            c.seeds = get_as<std::vector<std::uint64_t>>(s, "seeds");
    }
    if (j.contains("L"))
        c.num_rrhs = get_as<std::size_t>(j["L"], "L");
    if (j.contains("K"))
        c.num_users = scalar_or_list<std::size_t>(j["K"], "K");
    if (j.contains("antennas"))
        c.antennas = get_as<int>(j["antennas"], "antennas");
    if (j.contains("fronthaul_cap"))
    {
        const json &f = j["fronthaul_cap"];
        c.fronthaul.clear();
        if (!f.is_array())
            c.fronthaul.push_back({get_as<int>(f, "fronthaul_cap"), {}});
        else
            for (const json &p : f)
            {
                if (p.is_array())
                    c.fronthaul.push_back({0, get_as<std::vector<int>>(p, "fronthaul_cap")});
                else
                    c.fronthaul.push_back({get_as<int>(p, "fronthaul_cap"), {}});
            }
    }
    if (j.contains("gamma_db"))
        c.gamma_db = scalar_or_list<double>(j["gamma_db"], "gamma_db");
    if (j.contains("region_half_width_m"))
        c.region_half_width_m = get_as<double>(j["region_half_width_m"], "region_half_width_m");
    if (j.contains("p_max_w"))
        c.p_max_w = get_as<double>(j["p_max_w"], "p_max_w");
    if (j.contains("zeta"))
        c.zeta = get_as<double>(j["zeta"], "zeta");
    if (j.contains("channel"))
    {
        const json &ch = j["channel"];
        check_keys(ch,
                   {"pathloss_offset_db", "pathloss_slope_db_per_decade", "shadowing_std_db",
                    "noise_density_dbm_per_hz", "bandwidth_hz", "antenna_gain_dbi"},
                   "channel");
        auto set = [&](const char *key, double &field) {
            if (ch.contains(key))
                field = get_as<double>(ch[key], std::string("channel.") + key);
        };
        set("pathloss_offset_db", c.channel.pathloss_offset_db);
        set("pathloss_slope_db_per_decade", c.channel.pathloss_slope_db_per_decade);
        set("shadowing_std_db", c.channel.shadowing_std_db);
        set("noise_density_dbm_per_hz", c.channel.noise_density_dbm_per_hz);
        set("bandwidth_hz", c.channel.bandwidth_hz);
        set("antenna_gain_dbi", c.channel.antenna_gain_dbi);
    }
    if (j.contains("power"))
    {
        const json &p = j["power"];
        check_keys(p, {"p_cir_w", "p_slp_w", "eta"}, "power");
        if (p.contains("p_cir_w"))
            c.p_cir_w = get_as<double>(p["p_cir_w"], "power.p_cir_w");
        if (p.contains("p_slp_w"))
            c.p_slp_w = get_as<double>(p["p_slp_w"], "power.p_slp_w");
        if (p.contains("eta"))
            c.eta = get_as<double>(p["eta"], "power.eta");
    }
    if (j.contains("algorithms"))
    {
        c.algorithms.clear();
        for (const std::string &name : scalar_or_list<std::string>(j["algorithms"], "algorithms"))
            c.algorithms.push_back(parse_algorithm(name));
    }
    if (j.contains("solver"))
    {
        const json &s = j["solver"];
        check_keys(s, {"feasibility_tol", "optimality_tol", "max_iterations"}, "solver");
        if (s.contains("feasibility_tol"))
            c.solver.feasibility_tol = get_as<double>(s["feasibility_tol"], "solver.feasibility_tol");
        if (s.contains("optimality_tol"))
            c.solver.optimality_tol = get_as<double>(s["optimality_tol"], "solver.optimality_tol");
        if (s.contains("max_iterations"))
            c.solver.max_iterations = get_as<int>(s["max_iterations"], "solver.max_iterations");
    }
    if (j.contains("reversion"))
    {
        const std::string r = get_as<std::string>(j["reversion"], "reversion");
        if (r == "stop")
            c.inflation.reversion = ReversionPolicy::kStop;
        else if (r == "continue")
            c.inflation.reversion = ReversionPolicy::kContinue;
        else
            throw ConfigError("reversion must be 'stop' or 'continue'");
    }
    if (j.contains("workers"))
        c.workers = get_as<int>(j["workers"], "workers");
    if (j.contains("record_wall_time"))
        c.record_wall_time = get_as<bool>(j["record_wall_time"], "record_wall_time");
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string &path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text)
{
    std::vector<std::uint64_t> seeds;
    auto number = [](std::string_view s) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try
        {
            v = std::stoull(std::string(s), &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (s.empty() || used != s.size())
            throw ConfigError("bad seed '" + std::string(s) + "'");
        return std::uint64_t(v);
    };
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view token = text.substr(pos, comma - pos);
        const std::size_t dash = token.find('-');
        if (dash == std::string_view::npos)
            seeds.push_back(number(token));
        else
        {
            const std::uint64_t lo = number(token.substr(0, dash));
            const std::uint64_t hi = number(token.substr(dash + 1));
            if (hi < lo)
                throw ConfigError("empty seed range '" + std::string(token) + "'");
            for (std::uint64_t s = lo; s <= hi; ++s)
                seeds.push_back(s);
        }
        pos = comma + 1;
    }
    return seeds;
}

// ---------------------------------------------------------------- sweeps

SweepInstance make_instance(const ExperimentConfig &e, std::uint64_t seed, std::size_t num_users, double gamma_db,
                            const FronthaulPoint &fronthaul)
{
    SweepInstance inst;
    NetworkConfig &c = inst.config;
    c = NetworkConfig::uniform(e.num_rrhs, num_users, e.antennas, 0, e.p_max_w, db_to_linear(gamma_db), e.zeta);
    c.fronthaul_caps = fronthaul.caps(e.num_rrhs);
    c.validate();
    inst.params = PowerParams::uniform(e.num_rrhs, e.p_cir_w, e.p_slp_w, e.eta);
    inst.topology = generate_topology(seed, c, e.region_half_width_m);
    inst.channels = generate_channel(seed, inst.topology, c, e.channel);
    return inst;
}

SweepRow run_point(const ExperimentConfig &e, std::uint64_t seed, std::size_t num_users, double gamma_db,
                   std::size_t fronthaul_index, Algorithm algorithm)
{
    const FronthaulPoint &fp = e.fronthaul.at(fronthaul_index);
    SweepRow row;
    row.seed = seed;
    row.num_users = num_users;
    row.gamma_db = gamma_db;
    row.fronthaul_index = fronthaul_index;
    row.fronthaul_cap = fp.label();
    row.algorithm = algorithm;

    const SweepInstance inst = make_instance(e, seed, num_users, gamma_db, fp);
    const auto start = std::chrono::steady_clock::now();
    NetworkState state;
    switch (algorithm)
    {
    case Algorithm::kInflation: {
        const InflationResult r = inflate(inst.channels, inst.params, inst.config, e.solver, e.inflation);
        row.feasible = r.feasible;
        row.objective_f = r.power;
        row.socp_solves = r.socp_solves();
        row.numerical_failure = r.trace.numerical_failures > 0;
        state = r.state;
        break;
    }
    case Algorithm::kLteA: {
        if (inst.config.total_fronthaul() < int(num_users))
        {
            state = NetworkState(inst.config.num_rrhs, num_users);
            state.a.setOnes();
            break;
        }
        state = lte_a_state(inst.topology, inst.config);
        const FixedSolve r = lte_a_solve(inst.channels, inst.params, inst.config, state, e.solver);
        row.feasible = r.feasible();
        row.objective_f = r.power;
        row.socp_solves = 1;
        row.numerical_failure = r.status == SolveStatus::kNumericalFailure;
        break;
    }
    case Algorithm::kOracle: {
        const OracleResult r =
            enumerate_optimal(inst.channels, inst.params, inst.config, OracleObjective::kPri, e.solver);
        row.feasible = r.feasible;
        row.objective_f = r.power;
        row.socp_solves = r.configurations;
        row.numerical_failure = r.numerical_failures > 0;
        state = r.state;
        break;
    }
    }
    const auto stop = std::chrono::steady_clock::now();
    if (e.record_wall_time)
        row.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (row.feasible)
        row.power_w = row.objective_f + inst.params.total_sleep_power();
    else
        row.objective_f = 0.0;
    row.active_rrhs = state.a.size() ? state.active_rrhs() : 0;
    return row;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &fn)
{
    const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), count);
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        });
    for (std::thread &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

namespace {

auto row_key(const SweepRow &r)
{
    return std::make_tuple(r.num_users, r.fronthaul_index, r.gamma_db, r.seed, int(r.algorithm));
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig &e)
{
    e.validate();
    struct Task {
        std::uint64_t seed;
        std::size_t users;
        double gamma;
        std::size_t fronthaul;
        Algorithm algorithm;
    };
    std::vector<Task> tasks;
    for (std::size_t users : e.num_users)
        for (std::size_t f = 0; f < e.fronthaul.size(); ++f)
            for (double g : e.gamma_db)
                for (std::uint64_t s : e.seeds)
                    for (Algorithm a : e.algorithms)
                        tasks.push_back({s, users, g, f, a});

    std::vector<SweepRow> rows(tasks.size());
    parallel_for(tasks.size(), e.workers, [&](std::size_t i) {
        const Task &t = tasks[i];
        rows[i] = run_point(e, t.seed, t.users, t.gamma, t.fronthaul, t.algorithm);
    });
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow &a, const SweepRow &b) { return row_key(a) < row_key(b); });
    return rows;
}

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void write_rows_csv(std::ostream &os, const std::vector<SweepRow> &rows)
{
    os << kSweepCsvHeader << '\n';
    for (const SweepRow &r : rows)
    {
        os << r.seed << ',' << r.num_users << ',' << fmt(r.gamma_db) << ',' << r.fronthaul_cap << ','
           << to_string(r.algorithm) << ',' << (r.feasible ? "true" : "false") << ',';
        if (r.feasible)
            os << fmt(r.power_w) << ',' << fmt(r.objective_f);
        else
            os << ',';
        os << ',' << r.active_rrhs << ',' << r.socp_solves << ',' << fmt(r.wall_time_ms) << '\n';
    }
}

std::vector<SummaryRow> summarize(const std::vector<SweepRow> &rows)
{
    using Key = std::tuple<double, std::size_t, int, std::size_t>;
    std::map<Key, std::vector<const SweepRow *>> groups;
    for (const SweepRow &r : rows)
        groups[{r.gamma_db, r.fronthaul_index, int(r.algorithm), r.num_users}].push_back(&r);

    auto stats = [](const std::vector<double> &v, double &mean, double &se) {
        mean = se = 0.0;
        if (v.empty())
            return;
        for (double x : v)
            mean += x;
        mean /= double(v.size());
        if (v.size() < 2)
            return;
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        se = std::sqrt(ss / double(v.size() - 1) / double(v.size()));
    };

    std::vector<SummaryRow> out;
    for (const auto &[key, members] : groups)
    {
        SummaryRow s;
        s.gamma_db = std::get<0>(key);
        s.fronthaul_cap = members.front()->fronthaul_cap;
        s.algorithm = Algorithm(std::get<2>(key));
        s.num_users = std::get<3>(key);
        s.total = int(members.size());
        std::vector<double> power, objective, active;
        for (const SweepRow *r : members)
            if (r->feasible)
            {
                power.push_back(r->power_w);
                objective.push_back(r->objective_f);
                active.push_back(r->active_rrhs);
            }
        s.feasible = int(power.size());
        s.feasibility_rate = double(s.feasible) / double(s.total);
        stats(power, s.mean_power_w, s.se_power_w);
        stats(objective, s.mean_objective_f, s.se_objective_f);
        stats(active, s.mean_active_rrhs, s.se_active_rrhs);
        out.push_back(s);
    }
    return out;
}

void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &summary)
{
    os << "gamma_db,fronthaul_cap,algorithm,K,rows,feasible,feasibility_rate,mean_power_w,se_power_w,"
          "mean_objective_f,se_objective_f,mean_active_rrhs,se_active_rrhs\n";
    for (const SummaryRow &s : summary)
        os << fmt(s.gamma_db) << ',' << s.fronthaul_cap << ',' << to_string(s.algorithm) << ',' << s.num_users << ','
           << s.total << ',' << s.feasible << ',' << fmt(s.feasibility_rate) << ',' << fmt(s.mean_power_w) << ','
           << fmt(s.se_power_w) << ',' << fmt(s.mean_objective_f) << ',' << fmt(s.se_objective_f) << ','
           << fmt(s.mean_active_rrhs) << ',' << fmt(s.se_active_rrhs) << '\n';
}

// ---------------------------------------------------------- certification

CertificationRow certify_seed(const ExperimentConfig &e, std::uint64_t seed)
{
    const SweepInstance inst = make_instance(e, seed, e.num_users.front(), e.gamma_db.front(), e.fronthaul.front());
    CertificationRow row;
    row.seed = seed;

    const Certification c = certify(inst.channels, inst.params, inst.config, e.solver);
    row.feasible = c.pri.feasible && c.ref.feasible;
    row.gap = c.gap;
    row.lemma1 = c.lemma1.verdict;
    row.violations = c.lemma1.ref_optimum_in_pri;
    row.violations.insert(row.violations.end(), c.lemma1.pri_optimum_in_ref.begin(),
                          c.lemma1.pri_optimum_in_ref.end());
    row.ref_optimum = c.ref.objective_ref;
    row.pri_optimum = c.pri.power;
    row.oracle_numerical_failures = c.ref.numerical_failures;

    const RelaxedSolve relaxed = solve_relaxed_problem(inst.channels, inst.params, inst.config, e.solver);
    row.relaxed_status = relaxed.status;
    row.relaxed_objective = relaxed.objective;

    const InflationResult inf = inflate(inst.channels, inst.params, inst.config, e.solver, e.inflation);
    row.inflation_feasible = inf.feasible;
    row.inflation_power = inf.power;
    row.inflation_solves = inf.socp_solves();
    row.solve_budget = inst.config.total_fronthaul() + 1;
    row.inflation_state_valid = validate_state(inf.state, inst.config).empty();
    return row;
}

std::vector<CertificationRow> run_certification(const ExperimentConfig &e)
{
    e.validate();
    std::vector<CertificationRow> rows(e.seeds.size());
    parallel_for(rows.size(), e.workers, [&](std::size_t i) { rows[i] = certify_seed(e, e.seeds[i]); });
    return rows;
}

}  // namespace cran

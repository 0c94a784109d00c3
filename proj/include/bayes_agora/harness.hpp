#pragma once

// Experiment orchestration: learning curves q(n), the royal-family and
// atomic-chain counterexamples, the agreement refinement sweep, Wilson
// intervals and CSV output. Every sampled trial draws from its own stream
// split_seed(master_seed, {n, trial}), so results do not depend on the
// number of worker threads.

#include "ball_engine.hpp"
#include "config.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "run_analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace agora {

struct ExperimentSpec {
    std::string family = "chain"; ///< chain|cycle|complete|star|royal_family|gnp|file
    std::vector<int> sizes;
    json model = json{{"kind", "binary"}, {"q", "2/3"}};
    TieBreak tiebreak = TieBreak::own_initial();
    std::string engine = "exact"; ///< exact|local
    std::optional<int> horizon;   ///< local engine only
    int trials = 0;
    std::uint64_t master_seed = 0;
    double gnp_p = 0.5;
    std::string graph_file;       ///< family "file"
    int t_cap = 64;
    std::uint64_t state_budget = default_state_budget();
};

inline ExperimentSpec spec_from_json(const json& j)
{
    ExperimentSpec s;
    try {
        s.family = j.at("family").get<std::string>();
        if (j.contains("sizes"))
            s.sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("model"))
            s.model = j.at("model");
        if (j.contains("tiebreak"))
            s.tiebreak = parse_tiebreak(j.at("tiebreak").get<std::string>());
        s.engine = j.value("engine", s.engine);
        if (j.contains("horizon") && !j.at("horizon").is_null())
            s.horizon = j.at("horizon").get<int>();
        s.trials = j.value("trials", s.trials);
        s.master_seed = j.value("master_seed", s.master_seed);
        s.gnp_p = j.value("gnp_p", s.gnp_p);
        s.graph_file = j.value("graph_file", s.graph_file);
        s.t_cap = j.value("t_cap", s.t_cap);
        s.state_budget = j.value("state_budget", s.state_budget);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("experiment spec: ") + e.what());
    }
    static const std::vector<std::string> families{"chain", "cycle", "complete", "star", "royal_family", "gnp", "file"};
    if (std::find(families.begin(), families.end(), s.family) == families.end())
        throw Error(ErrorCode::ParseError, "unknown family '" + s.family + "'");
    if (s.engine != "exact" && s.engine != "local")
        throw Error(ErrorCode::ParseError, "engine must be \"exact\" or \"local\"");
    if (s.engine == "local" && !s.horizon)
        throw Error(ErrorCode::InvalidArgument, "the local engine needs a horizon");
    if (s.trials < 0)
        throw Error(ErrorCode::InvalidArgument, "trials must be non-negative");
    if (s.family == "file" && s.graph_file.empty())
        throw Error(ErrorCode::InvalidArgument, "family \"file\" needs graph_file");
    if (s.sizes.empty() && s.family != "file")
        throw Error(ErrorCode::InvalidArgument, "sizes must list at least one n");
    model_from_json(s.model); // validate early
    return s;
}

inline json to_json(const ExperimentSpec& s)
{
    json j{{"family", s.family},       {"sizes", s.sizes},   {"model", s.model},
           {"tiebreak", to_string(s.tiebreak)}, {"engine", s.engine}, {"trials", s.trials},
           {"master_seed", s.master_seed}, {"t_cap", s.t_cap}, {"state_budget", s.state_budget}};
    j["horizon"] = s.horizon ? json(*s.horizon) : json(nullptr);
    if (s.family == "gnp")
        j["gnp_p"] = s.gnp_p;
    if (s.family == "file")
        j["graph_file"] = s.graph_file;
    return j;
}

/// Graph-generation stream for gnp; the index is outside every trial index.
inline std::uint64_t graph_seed(std::uint64_t master, int n)
{
    return split_seed(master, {static_cast<std::uint64_t>(n), ~std::uint64_t{0}});
}

inline std::uint64_t trial_seed(std::uint64_t master, int n, std::uint64_t trial)
{
    return split_seed(master, {static_cast<std::uint64_t>(n), trial});
}

inline SocialGraph family_graph(const std::string& family, int n, std::uint64_t master_seed = 0, double gnp_p = 0.5,
                                const std::string& graph_file = {})
{
    if (family == "chain")
        return graphs::chain(n);
    if (family == "cycle")
        return graphs::cycle(n);
    if (family == "complete")
        return graphs::complete(n);
    if (family == "star")
        return graphs::star(n);
    if (family == "royal_family")
        return graphs::royal_family(n);
    if (family == "gnp")
        return graphs::gnp_connected(n, gnp_p, graph_seed(master_seed, n));
    if (family == "file")
        return read_graph_file(graph_file);
    throw Error(ErrorCode::InvalidArgument, "unknown family '" + family + "'");
}

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};

/// 95% Wilson score interval; trials = 0 gives [0, 1].
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double centre = (phat + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::clamp(std::min(centre - half, phat), 0.0, 1.0), std::clamp(std::max(centre + half, phat), 0.0, 1.0)};
}

struct EstimateRow {
    std::string family;
    int n = 0;
    std::string engine;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0;
    double wilson_lo = 0;
    double wilson_hi = 0;
    std::optional<Rational> exact; ///< set for exact-engine rows
    std::uint64_t master_seed = 0;
    double wall_seconds = 0;       ///< informational; never written to CSV
};

inline EstimateRow exact_row(std::string family, int n, const Rational& value, std::uint64_t master_seed)
{
    EstimateRow r;
    r.family = std::move(family);
    r.n = n;
    r.engine = "exact";
    r.exact = value;
    r.estimate = r.wilson_lo = r.wilson_hi = to_double(value);
    r.master_seed = master_seed;
    return r;
}

inline EstimateRow sampled_row(std::string family, int n, std::uint64_t successes, std::uint64_t trials,
                               std::uint64_t master_seed)
{
    EstimateRow r;
    r.family = std::move(family);
    r.n = n;
    r.engine = "local";
    r.trials = trials;
    r.successes = successes;
    r.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    const auto w = wilson_interval(successes, trials);
    r.wilson_lo = w.lo;
    r.wilson_hi = w.hi;
    r.master_seed = master_seed;
    return r;
}

inline std::string format_fixed(double v, int places = 12)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

inline std::string curve_csv(const std::vector<EstimateRow>& rows)
{
    CsvBuilder csv({"family", "n", "engine", "trials", "successes", "estimate", "wilson_lo", "wilson_hi", "exact",
                    "master_seed"});
    for (const auto& r : rows)
        csv.add(r.family, r.n, r.engine, r.trials, r.successes, format_fixed(r.estimate), format_fixed(r.wilson_lo),
                format_fixed(r.wilson_hi), r.exact ? to_string(*r.exact) : std::string(), r.master_seed);
    return csv.str();
}

struct RowError {
    int n = 0;
    ErrorCode code = ErrorCode::InvalidArgument;
    std::string message;
};

struct CurveResult {
    std::vector<EstimateRow> rows;
    std::vector<RowError> errors; ///< sizes that failed; the other rows are kept
};

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}
} // namespace detail

/// Sampled learning estimate: fraction of worlds where every agent's action at the horizon equals S.
inline std::uint64_t count_horizon_learning(const BallEngine& engine, const SignalModel& model, const SocialGraph& g,
                                            int n_key, int trials, std::uint64_t master_seed, unsigned threads)
{
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(trials), 0);
    parallel_for(ok.size(), threads, [&](std::size_t i) {
        const auto world = sample_world(model, g, trial_seed(master_seed, n_key, i));
        const auto acts = engine.final_actions(world);
        ok[i] = std::all_of(acts.begin(), acts.end(), [&](int a) { return a == world.state; });
    });
    return static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
}

/// q(n) per size. Exact rows are P_learn at the fixpoint (trials ignored);
/// local rows sample worlds and score action-at-horizon correctness.
inline CurveResult learning_curve(const ExperimentSpec& spec, unsigned threads = 1)
{
    const auto model = model_from_json(spec.model);
    CurveResult out;
    std::vector<int> sizes = spec.sizes;
    if (spec.family == "file")
        sizes = {read_graph_file(spec.graph_file).size()};
    for (int n : sizes) {
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto g = family_graph(spec.family, n, spec.master_seed, spec.gnp_p, spec.graph_file);
            if (spec.engine == "exact") {
                EngineOptions options;
                options.tiebreak = spec.tiebreak;
                options.t_cap = spec.t_cap;
                options.state_budget = spec.state_budget;
                options.keep_history = false;
                const auto run = run_exact(g, model, options);
                auto row = exact_row(spec.family, n, learning_and_agreement(run).learn, spec.master_seed);
                row.wall_seconds = detail::seconds_since(start);
                out.rows.push_back(std::move(row));
            } else {
                const BallEngine engine(g, model, *spec.horizon, spec.tiebreak, spec.state_budget, threads);
                const auto wins = count_horizon_learning(engine, model, g, n, spec.trials, spec.master_seed, threads);
                auto row = sampled_row(spec.family, n, wins, static_cast<std::uint64_t>(spec.trials), spec.master_seed);
                row.wall_seconds = detail::seconds_since(start);
                out.rows.push_back(std::move(row));
            }
        } catch (const Error& e) {
            out.errors.push_back({n, e.code(), e.what()});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Royal family

struct RoyalOptions {
    std::vector<int> sizes{10, 14, 18};
    Rational q{11, 20};
    int trials = 10000;
    std::uint64_t master_seed = 1;
    /// Unset: sample limit sets from one exact run per n (success = every A_u = {S}).
    /// Set: ball engine at this horizon (success = every action at T equals S).
    std::optional<int> horizon;
    int exact_n = 8;
    TieBreak tiebreak = TieBreak::own_initial();
    std::uint64_t state_budget = default_state_budget();
};

struct RoyalExactCheck {
    int n = 0;
    std::size_t event_profiles = 0; ///< (state, profile) pairs with every royal signal wrong
    std::size_t violations = 0;     ///< of those, pairs where some limit set is not {1-S}
    Rational event_probability;     ///< exact P(all royals wrong)
    int fixpoint_time = 0;
};

struct RoyalEventRow {
    int n = 0;
    std::uint64_t trials = 0;
    std::uint64_t all_royals_wrong = 0;
    WilsonInterval interval;
};

struct RoyalResult {
    std::vector<EstimateRow> rows;   ///< successes = non-learning trials
    std::vector<RoyalEventRow> events;
    RoyalExactCheck exact;
    Rational analytic_event;         ///< (1-q)^5
    std::vector<std::string> warnings;
};

inline bool all_royals_wrong(const std::vector<int>& signals, int state)
{
    for (int r = 0; r < graphs::royal_count; ++r)
        if (signals[static_cast<std::size_t>(r)] == state)
            return false;
    return true;
}

/// Exhaustive check on royal_family(n): when every royal's signal is wrong,
/// every agent's limit set is {1-S}.
inline RoyalExactCheck royal_exact_check(int n, const Rational& q, TieBreak tiebreak,
                                         std::uint64_t budget = default_state_budget())
{
    const auto g = graphs::royal_family(n);
    const auto model = make_binary_model(q);
    EngineOptions options;
    options.tiebreak = tiebreak;
    options.state_budget = budget;
    const auto run = run_exact(g, model, options);
    RoyalExactCheck check;
    check.n = n;
    check.fixpoint_time = run.require_fixpoint();
    u128 mass = 0;
    for (int s = 0; s < 2; ++s) {
        const LimitSet wrong = s ? LimitSet::Zero : LimitSet::One;
        for (std::size_t p = 0; p < run.profiles(); ++p) {
            if (!all_royals_wrong(run.space().signals_of(p), s))
                continue;
            ++check.event_profiles;
            mass += run.space().weight(s, p);
            for (int u = 0; u < n; ++u)
                if (run.limit_set(u, p) != wrong) {
                    ++check.violations;
                    break;
                }
        }
    }
    check.event_probability = ratio(mass, 2 * run.space().total());
    return check;
}

inline RoyalResult royal_family_experiment(const RoyalOptions& opt, unsigned threads = 1)
{
    RoyalResult result;
    const auto model = make_binary_model(opt.q);
    Rational wrong = 1 - opt.q;
    result.analytic_event = wrong * wrong * wrong * wrong * wrong;
    if (opt.trials > 0 && result.analytic_event < Rational(10, opt.trials))
        result.warnings.push_back("(1-q)^5 = " + to_decimal(result.analytic_event, 6) + " is below 10/trials; " +
                                  "expect few all-royals-wrong events");
    result.exact = royal_exact_check(opt.exact_n, opt.q, opt.tiebreak, opt.state_budget);

    for (int n : opt.sizes) {
        const auto g = graphs::royal_family(n);
        std::vector<std::uint8_t> fail(static_cast<std::size_t>(opt.trials), 0), event(fail.size(), 0);
        std::optional<Rational> exact;
        if (opt.horizon) {
            const BallEngine engine(g, model, *opt.horizon, opt.tiebreak, opt.state_budget, threads);
            parallel_for(fail.size(), threads, [&](std::size_t i) {
                const auto world = sample_world(model, g, trial_seed(opt.master_seed, n, i));
                const auto acts = engine.final_actions(world);
                fail[i] = !std::all_of(acts.begin(), acts.end(), [&](int a) { return a == world.state; });
                event[i] = all_royals_wrong(world.signals, world.state);
            });
        } else {
            EngineOptions options;
            options.tiebreak = opt.tiebreak;
            options.state_budget = opt.state_budget;
            options.keep_history = false;
            options.t_cap = 512;
            const auto run = run_exact(g, model, options);
            run.require_fixpoint();
            exact = 1 - learning_and_agreement(run).learn;
            parallel_for(fail.size(), threads, [&](std::size_t i) {
                const auto world = sample_world(model, g, trial_seed(opt.master_seed, n, i));
                const auto p = run.space().index_of(world.signals);
                const LimitSet right = world.state ? LimitSet::One : LimitSet::Zero;
                bool learned = true;
                for (int u = 0; u < n && learned; ++u)
                    learned = run.limit_set(u, p) == right;
                fail[i] = !learned;
                event[i] = all_royals_wrong(world.signals, world.state);
            });
        }
        const auto trials = static_cast<std::uint64_t>(opt.trials);
        const auto failures = static_cast<std::uint64_t>(std::count(fail.begin(), fail.end(), 1));
        const auto events = static_cast<std::uint64_t>(std::count(event.begin(), event.end(), 1));
        auto row = sampled_row("royal_family", n, failures, trials, opt.master_seed);
        if (exact) {
            row.engine = "limit";
            row.exact = exact;
        }
        result.rows.push_back(row);
        result.events.push_back({n, trials, events, wilson_interval(events, trials)});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Atomic chain (binary q = 2/3, OwnInitial)

struct ChainCheck {
    int n = 0;
    Rational non_learning;           ///< 1 - P_learn
    std::size_t stuck_pairs = 0;     ///< (profile, agent) pairs with a same-signal neighbor
    std::size_t violations = 0;      ///< of those, trajectories that ever leave W_u
    int fixpoint_time = 0;
};

struct ChainResult {
    std::vector<EstimateRow> rows; ///< estimate = exact non-learning probability
    std::vector<ChainCheck> checks;
};

/// Exhaustive check that an agent with a same-signal neighbor repeats its
/// signal forever, plus the exact non-learning probability.
inline ChainCheck atomic_chain_check(int n, TieBreak tiebreak = TieBreak::own_initial(),
                                     std::uint64_t budget = default_state_budget())
{
    const auto g = graphs::chain(n);
    const auto model = make_binary_model(Rational(2, 3));
    EngineOptions options;
    options.tiebreak = tiebreak;
    options.state_budget = budget;
    const auto run = run_exact(g, model, options);
    ChainCheck c;
    c.n = n;
    c.fixpoint_time = run.require_fixpoint();
    c.non_learning = 1 - learning_and_agreement(run).learn;
    for (std::size_t p = 0; p < run.profiles(); ++p) {
        for (int u = 0; u < n; ++u) {
            const int w = run.space().signal(p, u);
            bool twin = false;
            for (Vertex v : g.neighbors(u))
                twin = twin || run.space().signal(p, v) == w;
            if (!twin)
                continue;
            ++c.stuck_pairs;
            for (int t = 1; t <= run.rounds(); ++t)
                if (run.action(u, t, p) != run.initial_action(w)) {
                    ++c.violations;
                    break;
                }
        }
    }
    return c;
}

inline ChainResult atomic_chain_experiment(const std::vector<int>& sizes, std::uint64_t master_seed,
                                           unsigned threads = 1, std::uint64_t budget = default_state_budget())
{
    ChainResult result;
    result.checks.resize(sizes.size());
    parallel_for(sizes.size(), threads,
                 [&](std::size_t i) { result.checks[i] = atomic_chain_check(sizes[i], TieBreak::own_initial(), budget); });
    for (const auto& c : result.checks)
        result.rows.push_back(exact_row("chain", c.n, c.non_learning, master_seed));
    return result;
}

// ---------------------------------------------------------------------------
// Agreement under quantile refinement

struct AgreementRow {
    std::string graph;
    int n = 0;
    int m = 0;
    Rational p_disagree;
    std::size_t disagreement_profiles = 0;
    std::size_t violations = 0; ///< disagreement profiles with no agent at belief exactly 1/2
    int fixpoint_time = 0;
};

inline AgreementRow agreement_check(const SocialGraph& g, const std::string& name, int m, TieBreak tiebreak,
                                    std::uint64_t budget = default_state_budget())
{
    EngineOptions options;
    options.tiebreak = tiebreak;
    options.state_budget = budget;
    options.keep_history = false;
    const auto run = run_exact(g, make_quantile_model(m), options);
    AgreementRow row;
    row.graph = name;
    row.n = g.size();
    row.m = m;
    row.fixpoint_time = run.require_fixpoint();
    row.p_disagree = learning_and_agreement(run).disagree;
    const int t = row.fixpoint_time;
    for (std::size_t p = 0; p < run.profiles(); ++p) {
        bool differ = false, indifferent = false;
        const auto first = run.limit_set(0, p);
        for (int u = 0; u < run.agents(); ++u) {
            const auto& c = run.cell_stat(u, t, p);
            differ = differ || limit_set_of(c.w0, c.w1) != first;
            indifferent = indifferent || c.w0 == c.w1;
        }
        if (!differ)
            continue;
        ++row.disagreement_profiles;
        if (!indifferent)
            ++row.violations;
    }
    return row;
}

inline std::vector<AgreementRow> agreement_refinement_experiment(const SocialGraph& g, const std::string& name,
                                                                 const std::vector<int>& m_list, TieBreak tiebreak,
                                                                 unsigned threads = 1,
                                                                 std::uint64_t budget = default_state_budget())
{
    std::vector<AgreementRow> rows(m_list.size());
    parallel_for(m_list.size(), threads,
                 [&](std::size_t i) { rows[i] = agreement_check(g, name, m_list[i], tiebreak, budget); });
    return rows;
}

inline std::string agreement_csv(const std::vector<AgreementRow>& rows, const TieBreak& tiebreak)
{
    CsvBuilder csv({"family", "n", "m", "tiebreak", "p_disagree", "p_disagree_decimal", "disagreement_profiles",
                    "violations", "fixpoint_time"});
    for (const auto& r : rows)
        csv.add(r.graph, r.n, r.m, to_string(tiebreak), to_string(r.p_disagree), to_decimal(r.p_disagree),
                r.disagreement_profiles, r.violations, r.fixpoint_time);
    return csv.str();
}

} // namespace agora

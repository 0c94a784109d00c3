#pragma once

// The invariant battery behind `verify`: exhaustive checks over every
// (profile, agent, time) of exact runs on small graph families.

#include "config.hpp"
#include "exact_engine.hpp"
#include "run_analysis.hpp"

#include <chrono>
#include <map>
#include <sstream>

namespace agora {

enum class VerifyLevel { Quick, Full };

/// Deliberate defects for mutation testing of the battery itself.
enum class Fault {
    None,
    FloatBelief, ///< beliefs pass through double before the checks see them
};

struct VerifyCase {
    std::string name;
    SocialGraph graph;
    SignalModel model;
    TieBreak tiebreak;
};

struct InvariantResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    json counterexample; ///< first failure, null when none

    bool passed() const { return failures == 0; }
};

struct VerifyReport {
    std::string level;
    std::vector<InvariantResult> results;
    std::size_t cases = 0;
    double seconds = 0;

    bool passed() const
    {
        return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
    }
};

inline json to_json(const VerifyReport& report)
{
    json j{{"level", report.level}, {"cases", report.cases}, {"passed", report.passed()}};
    json arr = json::array();
    for (const auto& r : report.results)
        arr.push_back({{"invariant", r.name},
                       {"passed", r.passed()},
                       {"checked", r.checked},
                       {"failures", r.failures},
                       {"counterexample", r.counterexample}});
    j["results"] = arr;
    return j;
}

/// Graph, model, rule and the families used by a verify level.
inline std::vector<VerifyCase> verify_cases(VerifyLevel level)
{
    const int max_n = level == VerifyLevel::Quick ? 5 : 8;
    std::vector<std::pair<std::string, SocialGraph>> graphs_list;
    for (int n = 1; n <= max_n; ++n)
        graphs_list.emplace_back("chain(" + std::to_string(n) + ")", graphs::chain(n));
    for (int n = 3; n <= max_n; ++n)
        graphs_list.emplace_back("cycle(" + std::to_string(n) + ")", graphs::cycle(n));
    for (int n = 1; n <= max_n; ++n)
        graphs_list.emplace_back("complete(" + std::to_string(n) + ")", graphs::complete(n));
    for (int n = 2; n <= max_n; ++n)
        graphs_list.emplace_back("star(" + std::to_string(n) + ")", graphs::star(n));
    for (int n = 7; n <= std::max(7, max_n); ++n)
        graphs_list.emplace_back("royal_family(" + std::to_string(n) + ")", graphs::royal_family(n));

    const std::vector<std::pair<std::string, SignalModel>> models{{"binary(2/3)", make_binary_model(Rational(2, 3))},
                                                                  {"quantile(3)", make_quantile_model(3)}};
    const std::vector<TieBreak> rules{TieBreak::prefer_zero(), TieBreak::own_initial()};

    std::vector<VerifyCase> cases;
    for (const auto& [gname, g] : graphs_list)
        for (const auto& [mname, model] : models)
            for (const auto& rule : rules)
                cases.push_back({gname + " " + mname + " " + to_string(rule), g, model, rule});
    if (level == VerifyLevel::Full)
        for (const auto& rule : rules)
            cases.push_back({"chain(10) binary(2/3) " + to_string(rule), graphs::chain(10),
                             make_binary_model(Rational(2, 3)), rule});
    return cases;
}

namespace detail {

class Battery {
public:
    explicit Battery(Fault fault) : fault_(fault)
    {
        for (const char* name : {"fixpoint-reached", "partition-refinement", "martingale", "monotone-accuracy",
                                 "neighbor-dominance", "common-limit-accuracy", "limit-set-trichotomy",
                                 "fixpoint-stability", "k-estimate-at-fixpoint", "odds-decomposition",
                                 "gale-kariv-indifference", "cell-measurable-actions"})
            index_.emplace(name, add(name));
    }

    void check(const VerifyCase& vc)
    {
        EngineOptions options;
        options.tiebreak = vc.tiebreak;
        options.extra_rounds = extra_rounds;
        options.state_budget = std::numeric_limits<std::uint64_t>::max();
        const auto run = run_exact(vc.graph, vc.model, options);
        context_ = &vc;

        if (!expect("fixpoint-reached", run.fixpoint_reached(), [&] { return json{{"t_cap", options.t_cap}}; }))
            return;
        const int fix = *run.fixpoint_time();
        const int n = run.agents();
        const std::size_t P = run.profiles();

        for (int u = 0; u < n; ++u)
            for (int t = 1; t < run.rounds(); ++t) {
                // each time-(t+1) cell sits inside a single time-t cell
                std::vector<std::int64_t> parent(run.cell_count(u, t + 1), -1);
                bool ok = true;
                std::size_t bad = 0;
                for (std::size_t p = 0; p < P && ok; ++p) {
                    auto& slot = parent[run.cell(u, t + 1, p)];
                    if (slot < 0)
                        slot = run.cell(u, t, p);
                    ok = slot == run.cell(u, t, p);
                    bad = p;
                }
                expect("partition-refinement", ok, [&] { return where(u, t + 1, bad); });

                // E[X(t+1) | F(t)] = X(t) on every time-t cell
                std::vector<Rational> num(run.cell_count(u, t)), mass(run.cell_count(u, t));
                std::vector<std::uint8_t> seen(run.cell_count(u, t + 1), 0);
                for (std::size_t p = 0; p < P; ++p) {
                    const auto child = run.cell(u, t + 1, p);
                    if (seen[child])
                        continue;
                    seen[child] = 1;
                    const auto& c = run.stats(u, t + 1)[child];
                    const Rational w = ratio(c.w0 + c.w1, 1);
                    num[run.cell(u, t, p)] += w * belief(run, u, t + 1, p);
                    mass[run.cell(u, t, p)] += w;
                }
                for (std::size_t c = 0; c < num.size(); ++c) {
                    const auto rep = run.stats(u, t)[c].representative;
                    const Rational x = belief(run, u, t, rep);
                    expect("martingale", num[c] / mass[c] == x, [&] {
                        auto j = where(u, t, rep);
                        j["cell_belief"] = to_string(x);
                        j["child_average"] = to_string(num[c] / mass[c]);
                        return j;
                    });
                }
            }

        // accuracy is monotone in t and dominates the observed neighbors' previous accuracy
        std::vector<std::vector<Rational>> acc(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u)
            for (int t = 1; t <= run.rounds(); ++t)
                acc[u].push_back(accuracy(run, u, t));
        for (int u = 0; u < n; ++u)
            for (int t = 1; t < run.rounds(); ++t) {
                expect("monotone-accuracy", acc[u][t] >= acc[u][t - 1], [&] {
                    return json{{"agent", u}, {"time", t}, {"p_t", to_string(acc[u][t - 1])},
                                {"p_t1", to_string(acc[u][t])}};
                });
                for (Vertex w : run.graph().neighbors(u))
                    expect("neighbor-dominance", acc[u][t] >= acc[w][t - 1], [&] {
                        return json{{"agent", u}, {"neighbor", w}, {"time", t}};
                    });
            }

        for (int u = 1; u < n; ++u)
            expect("common-limit-accuracy", acc[u][fix - 1] == acc[0][fix - 1], [&] {
                return json{{"agent", u}, {"p_u", to_string(acc[u][fix - 1])}, {"p_0", to_string(acc[0][fix - 1])}};
            });

        for (int u = 0; u < n; ++u) {
            const auto k = limit_estimates(run, u, fix);
            for (std::size_t p = 0; p < P; ++p) {
                const Rational x = belief(run, u, fix, p);
                const LimitSet expected = x < half() ? LimitSet::Zero : x > half() ? LimitSet::One : LimitSet::Both;
                const LimitSet a = run.limit_set(u, p);
                expect("limit-set-trichotomy", a == expected, [&] { return where(u, fix, p); });
                expect("k-estimate-at-fixpoint", k[run.cell(u, fix, p)] == a, [&] { return where(u, fix, p); });
            }
            for (int t = fix + 1; t <= run.rounds(); ++t) {
                bool same = run.cells(u, t) == run.cells(u, fix);
                std::size_t bad = 0;
                if (same && vc.tiebreak.time_invariant())
                    for (std::size_t p = 0; p < P && same; ++p) {
                        same = run.action(u, t, p) == run.action(u, fix, p);
                        bad = p;
                    }
                expect("fixpoint-stability", same, [&] { return where(u, t, bad); });
            }
        }

        check_odds(run);

        // Gale-Kariv: u observes w, u plays 0 and w plays 1 at or after T* => X_u = 1/2
        for (int u = 0; u < n; ++u)
            for (Vertex w : run.graph().neighbors(u))
                for (std::size_t p = 0; p < P; ++p) {
                    bool u0 = false, w1 = false;
                    for (int t = fix; t <= run.rounds(); ++t) {
                        u0 = u0 || run.action(u, t, p) == 0;
                        w1 = w1 || run.action(w, t, p) == 1;
                    }
                    if (!(u0 && w1))
                        continue;
                    expect("gale-kariv-indifference", belief(run, u, fix, p) == half(), [&] {
                        auto j = where(u, fix, p);
                        j["neighbor"] = w;
                        return j;
                    });
                }

        for (int u = 0; u < n; ++u)
            for (int t = 1; t <= run.rounds(); ++t)
                for (std::size_t p = 0; p < P; ++p) {
                    const auto rep = run.cell_stat(u, t, p).representative;
                    expect("cell-measurable-actions", run.action(u, t, p) == run.action(u, t, rep),
                           [&] { return where(u, t, p); });
                }
    }

    std::vector<InvariantResult> take() { return std::move(results_); }

    static constexpr int extra_rounds = 3;

private:
    std::size_t add(const std::string& name)
    {
        results_.push_back({name, 0, 0, nullptr});
        return results_.size() - 1;
    }

    Rational belief(const ExactRun& run, int u, int t, std::size_t p) const
    {
        Rational x = run.belief(u, t, p);
        if (fault_ == Fault::FloatBelief)
            x = Rational(static_cast<float>(to_double(x)));
        return x;
    }

    /// initial odds * observation odds == posterior odds, on every (profile, agent, time).
    /// The observation term is summed per cell in one pass; odds_decompose is
    /// spot-checked against it on each cell representative.
    void check_odds(const ExactRun& run)
    {
        const auto& model = run.model();
        const auto& space = run.space();
        std::vector<u128> scaled[2];
        for (int s = 0; s < 2; ++s)
            for (const auto& v : model.scaled(s))
                scaled[s].push_back(to_u128(v));
        for (int u = 0; u < run.agents(); ++u)
            for (int t = 1; t <= run.rounds(); ++t) {
                std::vector<u128> others[2];
                others[0].assign(run.cell_count(u, t), 0);
                others[1].assign(run.cell_count(u, t), 0);
                for (std::size_t p = 0; p < run.profiles(); ++p)
                    for (int s = 0; s < 2; ++s) {
                        u128 w = 1;
                        for (int v = 0; v < run.agents(); ++v)
                            if (v != u)
                                w *= scaled[s][static_cast<std::size_t>(space.signal(p, v))];
                        others[s][run.cell(u, t, p)] += w;
                    }
                for (std::size_t p = 0; p < run.profiles(); ++p) {
                    const int own = space.signal(p, u);
                    const auto c = run.cell(u, t, p);
                    const Rational product =
                        (model.mu1()[own] / model.mu0()[own]) * ratio(others[1][c], others[0][c]);
                    const Rational x = belief(run, u, t, p);
                    expect("odds-decomposition", product == x / (1 - x), [&] { return where(u, t, p); });
                }
                for (const auto& stat : run.stats(u, t)) {
                    const auto d = odds_decompose(run, u, t, stat.representative);
                    const Rational x = belief(run, u, t, stat.representative);
                    expect("odds-decomposition", d.initial_odds * d.action_odds == x / (1 - x),
                           [&] { return where(u, t, stat.representative); });
                }
            }
    }

    json where(int u, int t, std::size_t p) const
    {
        std::ostringstream graph;
        write_graph(graph, context_->graph);
        return json{{"case", context_->name},
                    {"graph", graph.str()},
                    {"model", model_to_json(context_->model)},
                    {"tiebreak", to_string(context_->tiebreak)},
                    {"agent", u},
                    {"time", t},
                    {"profile", p}};
    }

    template <class Describe>
    bool expect(const std::string& name, bool ok, Describe&& describe)
    {
        auto& r = results_[index_.at(name)];
        ++r.checked;
        if (!ok) {
            if (r.failures == 0)
                r.counterexample = describe();
            ++r.failures;
        }
        return ok;
    }

    Fault fault_;
    const VerifyCase* context_ = nullptr;
    std::vector<InvariantResult> results_;
    std::map<std::string, std::size_t> index_;
};

} // namespace detail

inline VerifyReport verify_cases_report(const std::vector<VerifyCase>& cases, std::string level_name,
                                        Fault fault = Fault::None)
{
    const auto start = std::chrono::steady_clock::now();
    detail::Battery battery(fault);
    for (const auto& vc : cases)
        battery.check(vc);
    VerifyReport report;
    report.level = std::move(level_name);
    report.results = battery.take();
    report.cases = cases.size();
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

inline VerifyReport verify(VerifyLevel level, Fault fault = Fault::None)
{
    return verify_cases_report(verify_cases(level), level == VerifyLevel::Quick ? "quick" : "full", fault);
}

} // namespace agora

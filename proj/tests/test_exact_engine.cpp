#include <bayes_agora/exact_engine.hpp>
#include <bayes_agora/run_analysis.hpp>

#include "oracle/brute_force.hpp"

#include <catch_amalgamated.hpp>

using namespace agora;

namespace {
Rational R(long long a, long long b = 1) { return Rational(a, b); }
const SignalModel q23 = make_binary_model(Rational(2, 3));

std::size_t profile(const ExactRun& run, std::vector<int> signals) { return run.space().index_of(signals); }

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an agora::Error");
    return ErrorCode::InvalidArgument;
}

oracle::Rule to_oracle(const TieBreak& t)
{
    switch (t.kind) {
    case TieBreak::Kind::PreferZero: return oracle::Rule::PreferZero;
    case TieBreak::Kind::PreferOne: return oracle::Rule::PreferOne;
    case TieBreak::Kind::OwnInitial: return oracle::Rule::OwnInitial;
    default: return oracle::Rule::Coin;
    }
}
} // namespace

TEST_CASE("profile space weights")
{
    ProfileSpace space(make_quantile_model(3), 4);
    CHECK(space.size() == 81);
    u128 s0 = 0, s1 = 0;
    for (std::size_t p = 0; p < space.size(); ++p) {
        CHECK(space.weight(0, p) > 0);
        s0 += space.weight(0, p);
        s1 += space.weight(1, p);
        CHECK(space.index_of(space.signals_of(p)) == p);
    }
    CHECK(s0 == space.total());
    CHECK(s1 == space.total());
}

TEST_CASE("single agent")
{
    auto run = run_exact(graphs::complete(1), q23, TieBreak::own_initial());
    CHECK(run.fixpoint_time() == 1);
    const auto p = profile(run, {1});
    for (int t = 1; t <= 5; ++t) {
        CHECK(run.belief(0, t, p) == R(2, 3));
        CHECK(run.action(0, t, p) == 1);
    }
    CHECK(run.limit_set(0, p) == LimitSet::One);
}

TEST_CASE("two-agent edge")
{
    auto run = run_exact(graphs::chain(2), q23, TieBreak::own_initial());
    REQUIRE(run.fixpoint_reached());
    const auto split = profile(run, {1, 0});
    CHECK(run.action(0, 1, split) == 1);
    CHECK(run.action(1, 1, split) == 0);
    CHECK(run.belief(0, 2, split) == R(1, 2));
    CHECK(run.belief(1, 2, split) == R(1, 2));
    for (int t = 2; t <= 6; ++t) {
        CHECK(run.action(0, t, split) == 1);
        CHECK(run.action(1, t, split) == 0);
    }
    CHECK(run.limit_set(0, split) == LimitSet::Both);
    CHECK(run.limit_set(1, split) == LimitSet::Both);
    const auto same = profile(run, {1, 1});
    CHECK(run.belief(0, 2, same) == R(4, 5));
    CHECK(run.belief(1, 2, same) == R(4, 5));
    CHECK(run.limit_set(0, same) == LimitSet::One);
}

TEST_CASE("budget, connectivity and precision guards")
{
    EngineOptions small;
    small.state_budget = 1000;
    auto e = code_of([&] { run_exact(graphs::chain(8), q23, small); });
    CHECK(e == ErrorCode::StateBudgetExceeded);
    bool refused = false;
    try {
        run_exact(graphs::chain(20), q23, EngineOptions{});
    } catch (const Error& err) {
        refused = true;
        CHECK(std::string(err.what()).find("1342177280") != std::string::npos); // 2^20 * 20 * 64
    }
    CHECK(refused);
    CHECK(code_of([] { run_exact(SocialGraph::from_edges(2, {{0, 1}}), q23, EngineOptions{}); }) ==
          ErrorCode::NotStronglyConnected);
    // D = 3^50 per agent: D^n leaves the 126-bit range
    EngineOptions big;
    big.state_budget = std::numeric_limits<std::uint64_t>::max();
    const BigInt d = boost::multiprecision::pow(BigInt(3), 50);
    auto fine = make_model({"a", "b"}, {Rational(BigInt(1), d), 1 - Rational(BigInt(1), d)},
                           {1 - Rational(BigInt(1), d), Rational(BigInt(1), d)});
    CHECK(code_of([&] { run_exact(graphs::chain(2), fine, big); }) == ErrorCode::WeightPrecisionExceeded);
    CHECK(code_of([] { EngineOptions o; o.t_cap = 0; run_exact(graphs::chain(2), q23, o); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("cap hits are reported, never treated as limits")
{
    EngineOptions o;
    o.t_cap = 2;
    auto run = run_exact(graphs::chain(6), q23, o);
    CHECK(run.cap_hit());
    CHECK(run.rounds() == 2);
    CHECK(code_of([&] { run.limit_set(0, 0); }) == ErrorCode::FixpointNotReached);
    CHECK(code_of([&] { run.require_round(3); }) == ErrorCode::TimeOutOfRange);
}

TEST_CASE("extra rounds and released history agree with the plain run")
{
    const auto g = graphs::cycle(5);
    const auto model = make_quantile_model(3);
    EngineOptions plain;
    EngineOptions extra;
    extra.extra_rounds = 3;
    EngineOptions lean;
    lean.keep_history = false;
    auto a = run_exact(g, model, plain);
    auto b = run_exact(g, model, extra);
    auto c = run_exact(g, model, lean);
    REQUIRE(a.fixpoint_time() == b.fixpoint_time());
    REQUIRE(a.fixpoint_time() == c.fixpoint_time());
    const int fix = *a.fixpoint_time();
    CHECK(b.rounds() == fix + 4);
    for (int u = 0; u < g.size(); ++u) {
        CHECK(a.cells(u, fix) == c.cells(u, fix));
        CHECK(b.cells(u, fix + 4) == a.cells(u, fix));
        for (std::size_t p = 0; p < a.profiles(); ++p)
            CHECK(a.action(u, fix + 10, p) == b.action(u, fix + 4, p));
    }
    CHECK(c.round_available(1)); // round 1 is always kept
    if (fix >= 3)
        CHECK_FALSE(c.round_available(2));
}

TEST_CASE("engine agrees with the brute-force oracle")
{
    struct Case {
        std::string name;
        SocialGraph g;
        SignalModel model;
    };
    std::vector<Case> cases{
        {"chain(4) q", graphs::chain(4), q23},
        {"cycle(4) m3", graphs::cycle(4), make_quantile_model(3)},
        {"star(5) q", graphs::star(5), q23},
        {"complete(4) m3", graphs::complete(4), make_quantile_model(3)},
        {"royal(7) q", graphs::royal_family(7), make_binary_model(Rational(11, 20))},
        {"directed 4-cycle", SocialGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), q23},
        {"gnp(5)", graphs::gnp_connected(5, 0.5, 11), make_quantile_model(3)},
        {"chain(5) explicit", graphs::chain(5),
         make_model({"a", "b", "c"}, {R(1, 2), R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4), R(1, 2)})},
    };
    for (const auto& c : cases)
        for (const auto& rule : {TieBreak::prefer_zero(), TieBreak::prefer_one(), TieBreak::own_initial(),
                                 TieBreak::seeded_coin(31)}) {
            INFO(c.name << " " << to_string(rule));
            EngineOptions o;
            o.tiebreak = rule;
            o.extra_rounds = 2;
            auto run = run_exact(c.g, c.model, o);
            REQUIRE(run.fixpoint_reached());
            auto ref = oracle::simulate(c.g, c.model, run.rounds(), to_oracle(rule), rule.seed);
            for (std::size_t q = 0; q < ref.worlds.size(); ++q) {
                const auto p = run.space().index_of(ref.worlds[q].signals);
                for (int u = 0; u < c.g.size(); ++u)
                    for (int t = 1; t <= run.rounds(); ++t) {
                        REQUIRE(run.action(u, t, p) == ref.actions[q][u][t - 1]);
                        REQUIRE(run.belief(u, t, p) == ref.belief[q][u][t - 1]);
                    }
            }
            for (int u = 0; u < c.g.size(); ++u)
                for (int t = 1; t <= run.rounds(); ++t)
                    CHECK(accuracy(run, u, t) == oracle::accuracy(ref, u, t));
            CHECK(learning_and_agreement(run).learn == oracle::learn_probability(ref));
        }
}

TEST_CASE("agent ids relabel seeded coins")
{
    const auto g = graphs::chain(3);
    EngineOptions o;
    o.tiebreak = TieBreak::seeded_coin(5);
    o.agent_ids = {10, 11, 12};
    auto run = run_exact(g, q23, o);
    auto ref = oracle::simulate(g, q23, run.rounds(), oracle::Rule::Coin, 5, {10, 11, 12});
    for (std::size_t q = 0; q < ref.worlds.size(); ++q) {
        const auto p = run.space().index_of(ref.worlds[q].signals);
        for (int u = 0; u < 3; ++u)
            for (int t = 1; t <= run.rounds(); ++t)
                CHECK(run.action(u, t, p) == ref.actions[q][u][t - 1]);
    }
    o.agent_ids = {1};
    CHECK(code_of([&] { run_exact(g, q23, o); }) == ErrorCode::LengthMismatch);
}

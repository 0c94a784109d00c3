#include <bayes_agora/ball_engine.hpp>

#include <catch_amalgamated.hpp>

using namespace agora;

namespace {
const SignalModel q23 = make_binary_model(Rational(2, 3));

void require_same_as_exact(const SocialGraph& g, const SignalModel& model, const RealizedProfile& world, int T,
                           TieBreak rule)
{
    auto local = run_local(g, model, world, T, rule);
    EngineOptions o;
    o.tiebreak = rule;
    o.t_cap = T;
    auto full = run_exact(g, model, o);
    const auto p = full.space().index_of(world.signals);
    for (int u = 0; u < g.size(); ++u)
        for (int t = 1; t <= T; ++t) {
            REQUIRE(local.actions[u][t - 1] == full.action(u, t, p));
            REQUIRE(local.beliefs[u][t - 1] == full.belief(u, t, p));
        }
}
} // namespace

TEST_CASE("sample_world is deterministic and follows the mixture")
{
    const auto g = graphs::cycle(5);
    CHECK(sample_world(q23, g, 17) == sample_world(q23, g, 17));
    CHECK_FALSE(sample_world(q23, g, 17) == sample_world(q23, g, 18));
    // frequency of signal 1 per vertex: 1/2 * 1/3 + 1/2 * 2/3 = 1/2 (3 sigma band)
    const int N = 10000;
    std::vector<int> ones(5, 0);
    int state_ones = 0;
    for (int s = 0; s < N; ++s) {
        auto w = sample_world(q23, g, static_cast<std::uint64_t>(s));
        state_ones += w.state;
        for (int u = 0; u < 5; ++u)
            ones[u] += w.signals[u];
    }
    const double sigma = std::sqrt(N * 0.25);
    for (int k : ones)
        CHECK(std::abs(k - N / 2) < 3 * sigma);
    CHECK(std::abs(state_ones - N / 2) < 3 * sigma);

    // quantile(4): P(w=i) = (mu0(i)+mu1(i))/2 = 1/4 each
    const auto m4 = make_quantile_model(4);
    std::vector<int> hist(4, 0);
    for (int s = 0; s < N; ++s)
        ++hist[sample_world(m4, graphs::complete(1), static_cast<std::uint64_t>(s)).signals[0]];
    const double sd = std::sqrt(N * 0.25 * 0.75);
    for (int h : hist)
        CHECK(std::abs(h - N / 4) < 3 * sd);
}

TEST_CASE("chain(101) middle agent matches chain(7)")
{
    const auto big = graphs::chain(101);
    const auto small = graphs::chain(7);
    auto world = sample_world(q23, big, 5);
    RealizedProfile sub;
    sub.state = world.state;
    for (int v = 47; v <= 53; ++v)
        sub.signals.push_back(world.signals[v]);
    auto local = run_local(big, q23, world, 3, TieBreak::own_initial());
    auto full = run_exact(small, q23, TieBreak::own_initial(), 3);
    const auto p = full.space().index_of(sub.signals);
    for (int t = 1; t <= 3; ++t) {
        CHECK(local.actions[50][t - 1] == full.action(3, t, p));
        CHECK(local.beliefs[50][t - 1] == full.belief(3, t, p));
    }
    CHECK(local.ball_sizes[50] == 7);
}

TEST_CASE("horizon 1 is the signal threshold")
{
    const auto g = graphs::gnp_connected(40, 0.1, 3);
    const auto model = make_quantile_model(4);
    auto w = sample_world(model, g, 8);
    auto r = run_local(g, model, w, 1, TieBreak::prefer_one());
    for (int u = 0; u < g.size(); ++u) {
        const auto b = belief_of_signal(model, static_cast<std::size_t>(w.signals[u])).belief;
        CHECK(r.beliefs[u][0] == b);
        CHECK(r.actions[u][0] == (b > half() ? 1 : b < half() ? 0 : 1));
        CHECK(r.ball_sizes[u] == static_cast<int>(ball(g, u, 1).size())); // radius T, as for any horizon
    }
}

TEST_CASE("edges outside the ball do not matter")
{
    auto g = graphs::cycle(16);
    auto w = sample_world(q23, g, 21);
    auto before = run_local(g, q23, w, 3, TieBreak::own_initial());
    auto edges = g.edges();
    edges.emplace_back(8, 12);
    edges.emplace_back(12, 8);
    auto h = SocialGraph::from_edges(16, edges);
    auto after = run_local(h, q23, w, 3, TieBreak::own_initial());
    for (Vertex u : {0, 1, 15}) {
        CHECK(before.actions[u] == after.actions[u]);
        CHECK(before.beliefs[u] == after.beliefs[u]);
    }
}

TEST_CASE("ball engine equals the exact engine on small graphs")
{
    std::vector<SocialGraph> gs{graphs::chain(6), graphs::cycle(7), graphs::star(5), graphs::royal_family(8),
                                graphs::gnp_connected(8, 0.3, 4),
                                SocialGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {2, 0}})};
    std::uint64_t seed = 1;
    for (const auto& g : gs)
        for (int T = 1; T <= 4; ++T)
            for (const auto& rule : {TieBreak::own_initial(), TieBreak::prefer_zero(), TieBreak::seeded_coin(3)}) {
                INFO("n=" << g.size() << " T=" << T << " " << to_string(rule));
                require_same_as_exact(g, q23, sample_world(q23, g, seed++), T, rule);
            }
}

TEST_CASE("memoized engine is bit-identical to run_local")
{
    for (const auto& g : {graphs::royal_family(10), graphs::cycle(12), graphs::gnp_connected(10, 0.3, 9)})
        for (int T : {1, 2, 3}) {
            const auto model = make_quantile_model(3);
            BallEngine engine(g, model, T, TieBreak::seeded_coin(8), default_state_budget(), 2);
            for (std::uint64_t s = 0; s < 5; ++s) {
                auto w = sample_world(model, g, s);
                auto naive = run_local(g, model, w, T, TieBreak::seeded_coin(8));
                CHECK(engine.run(w) == naive);
                std::vector<int> last;
                for (const auto& a : naive.actions)
                    last.push_back(a.back());
                CHECK(engine.final_actions(w) == last);
            }
        }
}

TEST_CASE("ball sizes grow with T and budgets are enforced")
{
    const auto g = graphs::royal_family(14);
    auto w = sample_world(q23, g, 2);
    std::vector<int> prev(14, 0);
    for (int T = 1; T <= 3; ++T) {
        auto r = run_local(g, q23, w, T, TieBreak::own_initial());
        for (int u = 0; u < 14; ++u) {
            CHECK(r.ball_sizes[u] >= prev[u]);
            prev[u] = r.ball_sizes[u];
        }
    }
    try {
        run_local(g, q23, w, 6, TieBreak::own_initial(), 1000);
        FAIL("expected BallBudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BallBudgetExceeded);
        CHECK(std::string(e.what()).find("agent 0") != std::string::npos);
    }
    RealizedProfile bad{0, {0, 1}, 0};
    CHECK_THROWS_AS(run_local(g, q23, bad, 2, TieBreak::own_initial()), Error);
}

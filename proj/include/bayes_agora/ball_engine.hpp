#pragma once

// Horizon-limited exact computation of one realized world on large graphs.
//
// A_u(t) for t <= T is a deterministic function of the signals in B_T(G, u),
// so u's trajectory can be read off an exact sub-run on the induced ball
// with u as the root. The ball engine never claims limit behavior.

#include "exact_engine.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace agora {

struct RealizedProfile {
    int state = 0;
    std::vector<int> signals; ///< signal index per vertex
    std::uint64_t seed = 0;   ///< provenance; 0 when built by hand

    friend bool operator==(const RealizedProfile&, const RealizedProfile&) = default;
};

/// S uniform on {0,1}, then i.i.d. signals from mu_S, all from one SplitMix64 stream.
inline RealizedProfile sample_world(const SignalModel& model, const SocialGraph& g, std::uint64_t seed)
{
    if (model.denominator() >= (BigInt(1) << 63))
        throw Error(ErrorCode::WeightPrecisionExceeded, "model denominator too large for the sampler");
    const auto denom = model.denominator().convert_to<std::uint64_t>();
    std::vector<std::uint64_t> cumulative[2];
    for (int s = 0; s < 2; ++s) {
        std::uint64_t acc = 0;
        for (const auto& w : model.scaled(s)) {
            acc += w.convert_to<std::uint64_t>();
            cumulative[s].push_back(acc);
        }
    }
    SplitMix64 rng(seed);
    RealizedProfile world;
    world.seed = seed;
    world.state = rng.bit() ? 1 : 0;
    world.signals.resize(static_cast<std::size_t>(g.size()));
    const auto& cum = cumulative[world.state];
    for (auto& sig : world.signals) {
        const std::uint64_t x = rng.below(denom);
        sig = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    }
    return world;
}

struct LocalRunResult {
    int horizon = 0;
    std::vector<std::vector<int>> actions;       ///< [agent][t-1], t = 1..horizon
    std::vector<std::vector<Rational>> beliefs;  ///< [agent][t-1]
    std::vector<int> ball_sizes;                 ///< |B_T(G, u)|

    friend bool operator==(const LocalRunResult&, const LocalRunResult&) = default;
};

namespace detail {

inline void check_ball_budget(const RootedBall& b, std::size_t signals, int horizon, std::uint64_t budget)
{
    const BigInt states = state_space_size(signals, static_cast<int>(b.size()), horizon + 1);
    if (states > budget)
        throw Error(ErrorCode::BallBudgetExceeded,
                    "agent " + std::to_string(b.root()) + ": ball of " + std::to_string(b.size()) +
                        " vertices needs " + states.str() + " states (budget " + std::to_string(budget) + ")");
}

inline ExactRun run_on_ball(const RootedBall& b, const SignalModel& model, int horizon, TieBreak tiebreak,
                            std::uint64_t budget)
{
    EngineOptions options;
    options.tiebreak = tiebreak;
    options.t_cap = std::max(horizon, 1);
    options.state_budget = budget;
    options.require_strongly_connected = false;
    options.agent_ids = b.vertices();
    return run_exact(b.graph(), model, options);
}

inline std::size_t ball_profile(const RootedBall& b, const ProfileSpace& space, const RealizedProfile& world)
{
    std::vector<int> local(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        local[i] = world.signals.at(static_cast<std::size_t>(b.vertices()[i]));
    return space.index_of(local);
}

inline void validate_world(const SocialGraph& g, const SignalModel& model, const RealizedProfile& world)
{
    if (world.signals.size() != static_cast<std::size_t>(g.size()))
        throw Error(ErrorCode::LengthMismatch, "realized profile does not cover every vertex");
    for (int s : world.signals)
        if (s < 0 || static_cast<std::size_t>(s) >= model.size())
            throw Error(ErrorCode::UnknownSignal, "realized signal outside the model support");
}

} // namespace detail

/// Reference path: a fresh exact sub-run on B_T(G, u) for every agent.
inline LocalRunResult run_local(const SocialGraph& g, const SignalModel& model, const RealizedProfile& world,
                                int horizon, TieBreak tiebreak, std::uint64_t budget = default_state_budget())
{
    if (horizon < 1)
        throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
    detail::validate_world(g, model, world);
    LocalRunResult result;
    result.horizon = horizon;
    for (Vertex u = 0; u < g.size(); ++u) {
        auto b = ball(g, u, horizon);
        detail::check_ball_budget(b, model.size(), horizon, budget);
        auto run = detail::run_on_ball(b, model, horizon, tiebreak, budget);
        const std::size_t p = detail::ball_profile(b, run.space(), world);
        std::vector<int> acts;
        std::vector<Rational> bels;
        for (int t = 1; t <= horizon; ++t) {
            acts.push_back(run.action(0, t, p));
            bels.push_back(run.belief(0, t, p));
        }
        result.actions.push_back(std::move(acts));
        result.beliefs.push_back(std::move(bels));
        result.ball_sizes.push_back(static_cast<int>(b.size()));
    }
    return result;
}

/// Memoized ball engine for many worlds on one (graph, model, horizon, rule):
/// each agent's sub-run is computed once and reduced to the root's cells,
/// cell weights and actions for t <= T; a world is then answered by lookup.
/// Agreement with run_local is covered by the test suite.
class BallEngine {
public:
    BallEngine(const SocialGraph& g, const SignalModel& model, int horizon, TieBreak tiebreak,
               std::uint64_t budget = default_state_budget(), unsigned threads = 1)
        : graph_(g), model_(model), horizon_(horizon)
    {
        if (horizon < 1)
            throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
        roots_.resize(static_cast<std::size_t>(g.size()));
        for (Vertex u = 0; u < g.size(); ++u) {
            roots_[u].ball = ball(g, u, horizon);
            detail::check_ball_budget(roots_[u].ball, model.size(), horizon, budget);
        }
        parallel_for(roots_.size(), threads, [&](std::size_t u) {
            auto& root = roots_[u];
            auto run = detail::run_on_ball(root.ball, model, horizon, tiebreak, budget);
            root.strides.clear();
            for (std::size_t i = 0; i < root.ball.size(); ++i)
                root.strides.push_back(run.space().stride(static_cast<int>(i)));
            for (int t = 1; t <= horizon; ++t) {
                const int src = std::min(t, run.rounds());
                std::vector<std::int8_t> acts(run.profiles());
                for (std::size_t p = 0; p < run.profiles(); ++p)
                    acts[p] = static_cast<std::int8_t>(run.action(0, t, p));
                root.actions.push_back(std::move(acts));
                root.cells.push_back(run.cells(0, src));
                std::vector<std::pair<u128, u128>> w;
                for (const auto& c : run.stats(0, src))
                    w.emplace_back(c.w0, c.w1);
                root.weights.push_back(std::move(w));
            }
        });
    }

    int horizon() const noexcept { return horizon_; }

    LocalRunResult run(const RealizedProfile& world) const
    {
        detail::validate_world(graph_, model_, world);
        LocalRunResult result;
        result.horizon = horizon_;
        for (const auto& root : roots_) {
            std::size_t p = 0;
            for (std::size_t i = 0; i < root.ball.size(); ++i)
                p += static_cast<std::size_t>(world.signals[static_cast<std::size_t>(root.ball.vertices()[i])]) *
                     root.strides[i];
            std::vector<int> acts;
            std::vector<Rational> bels;
            for (int t = 0; t < horizon_; ++t) {
                acts.push_back(root.actions[t][p]);
                const auto& [w0, w1] = root.weights[t][root.cells[t][p]];
                bels.push_back(ratio(w1, w0 + w1));
            }
            result.actions.push_back(std::move(acts));
            result.beliefs.push_back(std::move(bels));
            result.ball_sizes.push_back(static_cast<int>(root.ball.size()));
        }
        return result;
    }

    /// Actions of every agent at the horizon, without building beliefs.
    std::vector<int> final_actions(const RealizedProfile& world) const
    {
        std::vector<int> out;
        out.reserve(roots_.size());
        for (const auto& root : roots_) {
            std::size_t p = 0;
            for (std::size_t i = 0; i < root.ball.size(); ++i)
                p += static_cast<std::size_t>(world.signals[static_cast<std::size_t>(root.ball.vertices()[i])]) *
                     root.strides[i];
            out.push_back(root.actions.back()[p]);
        }
        return out;
    }

private:
    struct Root {
        RootedBall ball;
        std::vector<std::size_t> strides;
        std::vector<std::vector<std::int8_t>> actions;
        std::vector<std::vector<std::uint32_t>> cells;
        std::vector<std::vector<std::pair<u128, u128>>> weights;
    };

    SocialGraph graph_;
    SignalModel model_;
    int horizon_;
    std::vector<Root> roots_;
};

} // namespace agora

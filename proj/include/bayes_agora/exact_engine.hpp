#pragma once

// Exact forward induction of the repeated-action dynamic over the joint
// signal-profile space.
//
// A profile assigns one signal to every agent; agent 0 is the least
// significant digit of the profile index. The information of agent u at time
// t is a partition of profile indices: at t = 1 profiles are grouped by u's
// own signal, and the time-(t+1) cell of a profile is its time-t cell
// intersected with the time-t actions of u's out-neighbors. Every cell carries
// the exact integer weights sum_{w in cell} mu_s^V(w) * D^n for s = 0, 1, so
// the belief is w1 / (w0 + w1) and comparisons with 1/2 are integer
// comparisons.

#include "error.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "signal_model.hpp"
#include "tiebreak.hpp"

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agora {

/// Optimal action set {0}, {1} or {0,1}; declaration order is the tie order
/// used by MAP estimates over limit sets.
enum class LimitSet : std::uint8_t { Zero = 0, One = 1, Both = 2 };

inline std::string to_string(LimitSet s)
{
    switch (s) {
    case LimitSet::Zero: return "{0}";
    case LimitSet::One: return "{1}";
    case LimitSet::Both: return "{0,1}";
    }
    return "?";
}

inline bool contains(LimitSet s, int action)
{
    return s == LimitSet::Both || static_cast<int>(s) == action;
}

inline LimitSet limit_set_of(u128 w0, u128 w1)
{
    if (w1 > w0)
        return LimitSet::One;
    if (w1 < w0)
        return LimitSet::Zero;
    return LimitSet::Both;
}

inline constexpr std::uint64_t builtin_state_budget = std::uint64_t{1} << 24;

/// BAYES_AGORA_BUDGET if set to a positive integer, otherwise 2^24
/// (enough for m = 2, n = 14 at the default round cap).
inline std::uint64_t default_state_budget()
{
    if (const char* env = std::getenv("BAYES_AGORA_BUDGET")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return v;
    }
    return builtin_state_budget;
}

struct EngineOptions {
    TieBreak tiebreak = TieBreak::own_initial();
    int t_cap = 64;
    /// Rounds computed past the fixpoint, for stability audits.
    int extra_rounds = 0;
    std::uint64_t state_budget = default_state_budget();
    bool require_strongly_connected = true;
    /// When false only the two most recent rounds (and round 1) are retained.
    bool keep_history = true;
    /// Global agent ids passed to the tie rule (identity when empty); sub-runs
    /// on a ball use them so seeded coins match the full graph.
    std::vector<int> agent_ids;
};

/// Number of (profile, agent, round) states a run may touch: m^n * n * rounds.
inline BigInt state_space_size(std::size_t signals, int agents, int rounds)
{
    return boost::multiprecision::pow(BigInt(signals), static_cast<unsigned>(agents)) * agents * rounds;
}

/// All m^n joint signal profiles with their exact per-state weights.
class ProfileSpace {
public:
    ProfileSpace(const SignalModel& model, int agents) : model_(model), agents_(agents), m_(model.size())
    {
        if (agents < 1)
            throw Error(ErrorCode::NTooSmall, "profile space needs at least one agent");
        BigInt total = boost::multiprecision::pow(model.denominator(), static_cast<unsigned>(agents));
        if (!fits_weight(total))
            throw Error(ErrorCode::WeightPrecisionExceeded,
                        "D^n = " + total.str() + " exceeds the 126-bit exact weight range");
        total_ = to_u128(total);
        stride_.resize(static_cast<std::size_t>(agents));
        std::size_t size = 1;
        for (int u = 0; u < agents; ++u) {
            stride_[u] = size;
            size *= m_;
        }
        size_ = size;
        for (int s = 0; s < 2; ++s) {
            std::vector<u128> scaled;
            for (const auto& v : model.scaled(s))
                scaled.push_back(to_u128(v));
            auto& w = weights_[s];
            w.reserve(size_);
            w.push_back(1);
            for (int u = 0; u < agents; ++u) {
                const std::size_t block = w.size();
                w.resize(block * m_);
                for (std::size_t k = m_; k-- > 0;)
                    for (std::size_t j = 0; j < block; ++j)
                        w[k * block + j] = w[j] * scaled[k];
            }
        }
    }

    const SignalModel& model() const noexcept { return model_; }
    int agents() const noexcept { return agents_; }
    std::size_t signals() const noexcept { return m_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t stride(int u) const { return stride_.at(static_cast<std::size_t>(u)); }

    int signal(std::size_t profile, int u) const
    {
        return static_cast<int>((profile / stride_[static_cast<std::size_t>(u)]) % m_);
    }

    std::vector<int> signals_of(std::size_t profile) const
    {
        std::vector<int> s(static_cast<std::size_t>(agents_));
        for (int u = 0; u < agents_; ++u)
            s[u] = signal(profile, u);
        return s;
    }

    std::size_t index_of(std::span<const int> signals) const
    {
        if (signals.size() != static_cast<std::size_t>(agents_))
            throw Error(ErrorCode::LengthMismatch, "profile has wrong number of agents");
        std::size_t p = 0;
        for (int u = 0; u < agents_; ++u) {
            if (signals[u] < 0 || static_cast<std::size_t>(signals[u]) >= m_)
                throw Error(ErrorCode::UnknownSignal, "signal index out of range");
            p += static_cast<std::size_t>(signals[u]) * stride_[u];
        }
        return p;
    }

    /// mu_s^V(profile) * D^n.
    u128 weight(int state, std::size_t profile) const { return weights_[state ? 1 : 0][profile]; }
    /// D^n, the total weight of either state.
    u128 total() const noexcept { return total_; }

private:
    SignalModel model_;
    int agents_;
    std::size_t m_;
    std::size_t size_ = 0;
    std::vector<std::size_t> stride_;
    std::vector<u128> weights_[2];
    u128 total_ = 0;
};

class ExactRun {
public:
    struct CellStat {
        u128 w0 = 0;
        u128 w1 = 0;
        std::uint32_t representative = 0; ///< smallest profile index in the cell
        std::int8_t action = 0;
    };

    const SocialGraph& graph() const noexcept { return graph_; }
    const ProfileSpace& space() const noexcept { return space_; }
    const SignalModel& model() const noexcept { return space_.model(); }
    const EngineOptions& options() const noexcept { return options_; }
    int agents() const noexcept { return graph_.size(); }
    std::size_t profiles() const noexcept { return space_.size(); }

    /// Last computed round.
    int rounds() const noexcept { return static_cast<int>(rounds_.size()); }
    /// T*: first t whose partitions equal those of t + 1 for every agent.
    std::optional<int> fixpoint_time() const noexcept { return fixpoint_; }
    bool fixpoint_reached() const noexcept { return fixpoint_.has_value(); }
    /// True when the run stopped at t_cap without detecting a fixpoint.
    bool cap_hit() const noexcept { return !fixpoint_; }

    bool round_available(int t) const
    {
        return t >= 1 && t <= rounds() && !rounds_[static_cast<std::size_t>(t - 1)].cells.empty();
    }

    const std::vector<std::uint32_t>& cells(int u, int t) const { return round(t).cells.at(static_cast<std::size_t>(u)); }
    std::uint32_t cell(int u, int t, std::size_t p) const { return cells(u, t)[p]; }
    std::size_t cell_count(int u, int t) const { return stats(u, t).size(); }
    const std::vector<CellStat>& stats(int u, int t) const { return round(t).stats.at(static_cast<std::size_t>(u)); }
    const CellStat& cell_stat(int u, int t, std::size_t p) const { return stats(u, t)[cell(u, t, p)]; }

    /// A_u(t) on profile p. Past the last computed round the frozen fixpoint
    /// partition is reused with the tie rule evaluated at time t.
    int action(int u, int t, std::size_t p) const
    {
        if (t > rounds() && fixpoint_) {
            const auto& c = cell_stat(u, rounds(), p);
            if (c.w0 != c.w1)
                return c.w1 > c.w0 ? 1 : 0;
            return options_.tiebreak.resolve(agent_id(u), t, initial_action(space_.signal(p, u)));
        }
        return cell_stat(u, t, p).action;
    }

    /// X_u(t) on profile p, exactly.
    Rational belief(int u, int t, std::size_t p) const
    {
        const auto& c = cell_stat(u, clamp_round(t), p);
        return ratio(c.w1, c.w0 + c.w1);
    }

    Rational limit_belief(int u, std::size_t p) const { return belief(u, require_fixpoint(), p); }

    LimitSet limit_set(int u, std::size_t p) const
    {
        const auto& c = cell_stat(u, require_fixpoint(), p);
        return limit_set_of(c.w0, c.w1);
    }

    /// Time-1 action of a signal (0 when the signal alone is uninformative).
    int initial_action(int signal) const { return initial_action_.at(static_cast<std::size_t>(signal)); }

    int require_fixpoint() const
    {
        if (!fixpoint_)
            throw Error(ErrorCode::FixpointNotReached,
                        "no fixpoint within t_cap = " + std::to_string(options_.t_cap));
        return *fixpoint_;
    }

    void require_round(int t) const
    {
        if (!round_available(t))
            throw Error(ErrorCode::TimeOutOfRange,
                        "round " + std::to_string(t) + " not available (computed 1.." + std::to_string(rounds()) + ")");
    }

private:
    friend ExactRun run_exact(const SocialGraph&, const SignalModel&, const EngineOptions&);

    struct Round {
        std::vector<std::vector<std::uint32_t>> cells; // [agent][profile]
        std::vector<std::vector<CellStat>> stats;      // [agent][cell]
    };

    ExactRun(const SocialGraph& g, const SignalModel& model, const EngineOptions& options)
        : graph_(g), space_(model, g.size()), options_(options)
    {
        for (std::size_t k = 0; k < model.size(); ++k) {
            const auto& a = model.scaled(0)[k];
            const auto& b = model.scaled(1)[k];
            initial_action_.push_back(b > a ? 1 : 0);
        }
    }

    const Round& round(int t) const
    {
        require_round(t);
        return rounds_[static_cast<std::size_t>(t - 1)];
    }

    int agent_id(int u) const
    {
        return options_.agent_ids.empty() ? u : options_.agent_ids[static_cast<std::size_t>(u)];
    }

    int clamp_round(int t) const { return (t > rounds() && fixpoint_) ? rounds() : t; }

    void finalize_round(Round& r, int t) const
    {
        const int n = agents();
        r.stats.assign(static_cast<std::size_t>(n), {});
        for (int u = 0; u < n; ++u) {
            auto& st = r.stats[u];
            const auto& cl = r.cells[u];
            for (std::size_t p = 0; p < cl.size(); ++p) {
                const std::uint32_t c = cl[p];
                if (c == st.size()) {
                    st.emplace_back();
                    st.back().representative = static_cast<std::uint32_t>(p);
                }
                st[c].w0 += space_.weight(0, p);
                st[c].w1 += space_.weight(1, p);
            }
            for (auto& c : st) {
                if (c.w1 != c.w0)
                    c.action = c.w1 > c.w0 ? 1 : 0;
                else
                    c.action = static_cast<std::int8_t>(
                        options_.tiebreak.resolve(agent_id(u), t, initial_action(space_.signal(c.representative, u))));
            }
        }
    }

    void first_round()
    {
        Round r;
        const int n = agents();
        r.cells.assign(static_cast<std::size_t>(n), {});
        for (int u = 0; u < n; ++u)
            r.cells[u] = relabel_by_signal(u);
        finalize_round(r, 1);
        rounds_.push_back(std::move(r));
    }

    std::vector<std::uint32_t> relabel_by_signal(int u) const
    {
        std::vector<std::uint32_t> out(profiles());
        std::vector<std::uint32_t> label(space_.signals(), std::numeric_limits<std::uint32_t>::max());
        std::uint32_t next = 0;
        for (std::size_t p = 0; p < out.size(); ++p) {
            auto& l = label[static_cast<std::size_t>(space_.signal(p, u))];
            if (l == std::numeric_limits<std::uint32_t>::max())
                l = next++;
            out[p] = l;
        }
        return out;
    }

    /// Computes round t from round t - 1; returns true if any agent's partition refined.
    bool next_round(int t)
    {
        const Round& prev = rounds_.back();
        const int n = agents();
        const std::size_t P = profiles();

        std::vector<std::vector<std::int8_t>> acted(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            acted[v].resize(P);
            const auto& cl = prev.cells[v];
            const auto& st = prev.stats[v];
            for (std::size_t p = 0; p < P; ++p)
                acted[v][p] = st[cl[p]].action;
        }

        Round r;
        r.cells.assign(static_cast<std::size_t>(n), {});
        bool refined = false;
        std::vector<std::uint32_t> table;
        for (int u = 0; u < n; ++u) {
            auto cur = prev.cells[u];
            std::size_t count = prev.stats[u].size();
            for (Vertex v : graph_.neighbors(u)) {
                table.assign(2 * count, std::numeric_limits<std::uint32_t>::max());
                std::uint32_t next = 0;
                const auto& bits = acted[v];
                for (std::size_t p = 0; p < P; ++p) {
                    auto& slot = table[2 * static_cast<std::size_t>(cur[p]) + static_cast<std::size_t>(bits[p])];
                    if (slot == std::numeric_limits<std::uint32_t>::max())
                        slot = next++;
                    cur[p] = slot;
                }
                count = next;
            }
            refined = refined || count != prev.stats[u].size();
            r.cells[u] = std::move(cur);
        }
        finalize_round(r, t);
        rounds_.push_back(std::move(r));
        return refined;
    }

    /// With a time-varying tie rule, an unrefined round is only a fixpoint if
    /// every neighbor's tie set is a union of the observer's cells, so that
    /// future coin flips cannot split them.
    bool ties_are_observer_measurable(int t) const
    {
        const Round& r = rounds_[static_cast<std::size_t>(t - 1)];
        for (int u = 0; u < agents(); ++u) {
            const auto& ucells = r.cells[u];
            for (Vertex v : graph_.neighbors(u)) {
                std::vector<std::int8_t> seen(r.stats[u].size(), -1);
                const auto& vcells = r.cells[v];
                const auto& vst = r.stats[v];
                for (std::size_t p = 0; p < ucells.size(); ++p) {
                    const auto& c = vst[vcells[p]];
                    const std::int8_t tie = c.w0 == c.w1 ? 1 : 0;
                    auto& s = seen[ucells[p]];
                    if (s < 0)
                        s = tie;
                    else if (s != tie)
                        return false;
                }
            }
        }
        return true;
    }

    void release_old_rounds()
    {
        if (options_.keep_history || rounds_.size() < 4)
            return;
        auto& old = rounds_[rounds_.size() - 3];
        old.cells = {};
        old.stats = {};
    }

    SocialGraph graph_;
    ProfileSpace space_;
    EngineOptions options_;
    std::vector<int> initial_action_;
    std::vector<Round> rounds_;
    std::optional<int> fixpoint_;
};

/// Runs the dynamic until the first round with no refinement (plus
/// options.extra_rounds) or until options.t_cap rounds have been computed.
inline ExactRun run_exact(const SocialGraph& g, const SignalModel& model, const EngineOptions& options = {})
{
    if (options.t_cap < 1)
        throw Error(ErrorCode::InvalidArgument, "t_cap must be at least 1");
    if (options.require_strongly_connected)
        g.require_strongly_connected();
    if (!options.agent_ids.empty() && options.agent_ids.size() != static_cast<std::size_t>(g.size()))
        throw Error(ErrorCode::LengthMismatch, "agent_ids must name every agent");
    // rounds held in memory: all of them, or round 1 plus the two most recent
    const int held = options.keep_history ? options.t_cap + options.extra_rounds
                                          : std::min(options.t_cap + options.extra_rounds, 3);
    const BigInt states = state_space_size(model.size(), g.size(), held);
    if (states > options.state_budget)
        throw Error(ErrorCode::StateBudgetExceeded,
                    "state space m^n*n*rounds = " + states.str() + " exceeds budget " +
                        std::to_string(options.state_budget) + " (m=" + std::to_string(model.size()) +
                        ", n=" + std::to_string(g.size()) + ", " +
                        BigInt(boost::multiprecision::pow(BigInt(model.size()), static_cast<unsigned>(g.size()))).str() +
                        " profiles)");
    if (model.size() > 0 && boost::multiprecision::pow(BigInt(model.size()), static_cast<unsigned>(g.size())) >
                                std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorCode::StateBudgetExceeded, "profile count exceeds 32-bit cell indexing");

    ExactRun run(g, model, options);
    run.first_round();
    int stop = options.t_cap;
    for (int t = 2; t <= stop; ++t) {
        const bool refined = run.next_round(t);
        run.release_old_rounds();
        if (!run.fixpoint_ && !refined &&
            (options.tiebreak.time_invariant() || run.ties_are_observer_measurable(t - 1))) {
            run.fixpoint_ = t - 1;
            stop = t + options.extra_rounds;
        }
    }
    return run;
}

inline ExactRun run_exact(const SocialGraph& g, const SignalModel& model, TieBreak tiebreak, int t_cap = 64)
{
    EngineOptions options;
    options.tiebreak = tiebreak;
    options.t_cap = t_cap;
    return run_exact(g, model, options);
}

} // namespace agora

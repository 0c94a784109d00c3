#pragma once

// Exact read-outs of an ExactRun: accuracies p_u(t), learning and agreement
// probabilities, the MAP limit-set estimate K_u(t), the coin action C_u(t)
// and the odds decomposition of a posterior into signal and observation parts.

#include "exact_engine.hpp"

#include <array>

namespace agora {

/// p_u(t) = P(A_u(t) = S).
inline Rational accuracy(const ExactRun& run, int u, int t)
{
    run.graph().check_vertex(u);
    run.require_round(t);
    u128 correct = 0;
    for (const auto& c : run.stats(u, t))
        correct += c.action ? c.w1 : c.w0;
    return ratio(correct, 2 * run.space().total());
}

struct LimitAccuracy {
    std::vector<Rational> per_agent; ///< p_u at T* (at the last round when no fixpoint)
    std::optional<Rational> common;  ///< p(G) when the run reached a fixpoint and all p_u agree
    bool fixpoint_reached = false;
};

inline LimitAccuracy limit_accuracy(const ExactRun& run)
{
    LimitAccuracy result;
    result.fixpoint_reached = run.fixpoint_reached();
    const int t = run.fixpoint_time().value_or(run.rounds());
    for (int u = 0; u < run.agents(); ++u)
        result.per_agent.push_back(accuracy(run, u, t));
    if (result.fixpoint_reached) {
        bool equal = true;
        for (const auto& p : result.per_agent)
            equal = equal && p == result.per_agent.front();
        if (equal)
            result.common = result.per_agent.front();
    }
    return result;
}

struct LearningAgreement {
    Rational learn;    ///< P(A_u = {S} for all u)
    Rational agree;    ///< P(A_u identical for all u)
    Rational disagree; ///< 1 - agree
};

inline LearningAgreement learning_and_agreement(const ExactRun& run)
{
    const int t = run.require_fixpoint();
    const int n = run.agents();
    u128 learn = 0, agree = 0;
    std::vector<const std::vector<std::uint32_t>*> cells;
    std::vector<const std::vector<ExactRun::CellStat>*> stats;
    for (int u = 0; u < n; ++u) {
        cells.push_back(&run.cells(u, t));
        stats.push_back(&run.stats(u, t));
    }
    for (std::size_t p = 0; p < run.profiles(); ++p) {
        std::array<int, 3> count{};
        for (int u = 0; u < n; ++u) {
            const auto& c = (*stats[u])[(*cells[u])[p]];
            ++count[static_cast<std::size_t>(limit_set_of(c.w0, c.w1))];
        }
        const u128 w0 = run.space().weight(0, p);
        const u128 w1 = run.space().weight(1, p);
        if (count[0] == n)
            learn += w0;
        if (count[1] == n)
            learn += w1;
        if (count[0] == n || count[1] == n || count[2] == n)
            agree += w0 + w1;
    }
    const u128 denom = 2 * run.space().total();
    LearningAgreement r{ratio(learn, denom), ratio(agree, denom), 0};
    r.disagree = 1 - r.agree;
    return r;
}

/// K_u(t) for every time-t cell of u: the limit set of u with the largest
/// posterior mass in the cell; ties go to the earlier of {0}, {1}, {0,1}.
inline std::vector<LimitSet> limit_estimates(const ExactRun& run, int u, int t)
{
    const int fix = run.require_fixpoint();
    run.require_round(t);
    const auto& cells = run.cells(u, t);
    std::vector<std::array<u128, 3>> mass(run.cell_count(u, t), std::array<u128, 3>{});
    for (std::size_t p = 0; p < run.profiles(); ++p) {
        const auto& lim = run.cell_stat(u, fix, p);
        mass[cells[p]][static_cast<std::size_t>(limit_set_of(lim.w0, lim.w1))] +=
            run.space().weight(0, p) + run.space().weight(1, p);
    }
    std::vector<LimitSet> k(mass.size());
    for (std::size_t c = 0; c < mass.size(); ++c) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < 3; ++j)
            if (mass[c][j] > mass[c][best])
                best = j;
        k[c] = static_cast<LimitSet>(best);
    }
    return k;
}

inline LimitSet map_limit_estimate(const ExactRun& run, int u, int t, std::size_t p)
{
    return limit_estimates(run, u, t)[run.cell(u, t, p)];
}

/// C_u(t): the element of K_u(t) when it is a singleton, otherwise coin_bit(seed, u, t).
inline int coin_action(LimitSet k, int u, int t, std::uint64_t seed)
{
    if (k == LimitSet::Both)
        return coin_bit(seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(t));
    return static_cast<int>(k);
}

inline int coin_action(const ExactRun& run, int u, int t, std::size_t p, std::uint64_t seed)
{
    return coin_action(map_limit_estimate(run, u, t, p), u, t, seed);
}

/// P(C_u(t) = S) for a fixed coin seed.
inline Rational coin_accuracy(const ExactRun& run, int u, int t, std::uint64_t seed)
{
    const auto k = limit_estimates(run, u, t);
    u128 correct = 0;
    const auto& cells = run.cells(u, t);
    for (std::size_t p = 0; p < run.profiles(); ++p)
        correct += coin_action(k[cells[p]], u, t, seed) ? run.space().weight(1, p) : run.space().weight(0, p);
    return ratio(correct, 2 * run.space().total());
}

struct OddsDecomposition {
    Rational initial_odds;   ///< mu1(w_u) / mu0(w_u)
    Rational action_odds;    ///< P(I_u(t) | S=1, own) / P(I_u(t) | S=0, own)
    Rational posterior_odds; ///< X_u(t) / (1 - X_u(t)), from the run's belief
};

/// Splits the posterior odds of u at (t, profile) into the private-signal
/// likelihood ratio and the likelihood ratio of the observed neighbor
/// actions. The observation term sums prod_{v != u} mu_s(w_v) over u's cell,
/// i.e. the law of I_u(t) with u's own signal (hence u's own action history)
/// held fixed.
inline OddsDecomposition odds_decompose(const ExactRun& run, int u, int t, std::size_t p)
{
    run.graph().check_vertex(u);
    run.require_round(t);
    const auto& model = run.model();
    const auto& space = run.space();
    const int own = space.signal(p, u);

    OddsDecomposition d;
    d.initial_odds = model.mu1()[own] / model.mu0()[own];

    std::vector<u128> scaled[2];
    for (int s = 0; s < 2; ++s)
        for (const auto& v : model.scaled(s))
            scaled[s].push_back(to_u128(v));
    const auto& cells = run.cells(u, t);
    const std::uint32_t target = cells[p];
    u128 others[2] = {0, 0};
    for (std::size_t q = 0; q < run.profiles(); ++q) {
        if (cells[q] != target)
            continue;
        for (int s = 0; s < 2; ++s) {
            u128 w = 1;
            for (int v = 0; v < run.agents(); ++v)
                if (v != u)
                    w *= scaled[s][static_cast<std::size_t>(space.signal(q, v))];
            others[s] += w;
        }
    }
    d.action_odds = ratio(others[1], others[0]);
    const Rational x = run.belief(u, t, p);
    d.posterior_odds = x / (1 - x);
    return d;
}

} // namespace agora

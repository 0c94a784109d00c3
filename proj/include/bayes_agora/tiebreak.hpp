#pragma once

#include "error.hpp"
#include "rng.hpp"

#include <cstdint>
#include <string>

namespace agora {

/// Action chosen when the posterior is exactly 1/2.
///
/// OwnInitial repeats the agent's time-1 action (its own signal's verdict),
/// and falls back to 0 when that signal is itself uninformative. SeededCoin
/// draws coin_bit(seed, agent, time), shared by every tied profile of that
/// agent at that time.
struct TieBreak {
    enum class Kind { PreferZero, PreferOne, OwnInitial, SeededCoin };

    Kind kind = Kind::OwnInitial;
    std::uint64_t seed = 0;

    static TieBreak prefer_zero() { return {Kind::PreferZero, 0}; }
    static TieBreak prefer_one() { return {Kind::PreferOne, 0}; }
    static TieBreak own_initial() { return {Kind::OwnInitial, 0}; }
    static TieBreak seeded_coin(std::uint64_t seed) { return {Kind::SeededCoin, seed}; }

    /// False only for SeededCoin, whose choice varies with time.
    bool time_invariant() const noexcept { return kind != Kind::SeededCoin; }

    int resolve(int agent, int time, int initial_action) const noexcept
    {
        switch (kind) {
        case Kind::PreferZero: return 0;
        case Kind::PreferOne: return 1;
        case Kind::OwnInitial: return initial_action;
        case Kind::SeededCoin:
            return coin_bit(seed, static_cast<std::uint64_t>(agent), static_cast<std::uint64_t>(time));
        }
        return 0;
    }

    friend bool operator==(const TieBreak&, const TieBreak&) = default;
};

inline std::string to_string(const TieBreak& rule)
{
    switch (rule.kind) {
    case TieBreak::Kind::PreferZero: return "prefer-zero";
    case TieBreak::Kind::PreferOne: return "prefer-one";
    case TieBreak::Kind::OwnInitial: return "own-initial";
    case TieBreak::Kind::SeededCoin: return "coin:" + std::to_string(rule.seed);
    }
    return "?";
}

/// Accepts "prefer-zero", "prefer-one", "own-initial" and "coin:<seed>".
inline TieBreak parse_tiebreak(const std::string& text)
{
    if (text == "prefer-zero")
        return TieBreak::prefer_zero();
    if (text == "prefer-one")
        return TieBreak::prefer_one();
    if (text == "own-initial")
        return TieBreak::own_initial();
    if (text.rfind("coin:", 0) == 0) {
        try {
            std::size_t used = 0;
            auto seed = std::stoull(text.substr(5), &used);
            if (used == text.size() - 5)
                return TieBreak::seeded_coin(seed);
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorCode::ParseError,
                "unknown tie-break rule '" + text + "' (expected prefer-zero, prefer-one, own-initial, coin:<seed>)");
}

} // namespace agora

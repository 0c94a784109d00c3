#pragma once

// delta-independence, the three-bit majority / MAP lemmas with their explicit
// constants, the far-ball independence check and the degree-vs-accuracy curve.

#include "exact_engine.hpp"
#include "run_analysis.hpp"
#include "topology.hpp"

#include <array>
#include <cmath>

namespace agora {

/// Dense joint law of k finite variables; outcome tuples are laid out
/// row-major with the last variable fastest.
class FiniteJointDistribution {
public:
    static constexpr std::size_t max_cells = std::size_t{1} << 20;

    static FiniteJointDistribution make(std::vector<std::size_t> arities, std::vector<Rational> probs)
    {
        if (arities.empty())
            throw Error(ErrorCode::InvalidDistribution, "joint distribution needs at least one variable");
        std::size_t cells = 1;
        for (auto a : arities) {
            if (a == 0)
                throw Error(ErrorCode::InvalidDistribution, "variable with an empty outcome set");
            if (cells > max_cells / a)
                throw Error(ErrorCode::InvalidDistribution, "joint table exceeds 2^20 cells");
            cells *= a;
        }
        if (probs.size() != cells)
            throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(cells) + " probabilities, got " +
                                                       std::to_string(probs.size()));
        Rational sum = 0;
        for (const auto& p : probs) {
            if (p < 0)
                throw Error(ErrorCode::InvalidDistribution, "negative probability " + to_string(p));
            sum += p;
        }
        if (sum != 1)
            throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + to_string(sum) + ", not 1");
        FiniteJointDistribution d;
        d.arities_ = std::move(arities);
        d.probs_ = std::move(probs);
        return d;
    }

    std::size_t variables() const noexcept { return arities_.size(); }
    const std::vector<std::size_t>& arities() const noexcept { return arities_; }
    const std::vector<Rational>& probabilities() const noexcept { return probs_; }

    std::vector<std::size_t> outcome(std::size_t cell) const
    {
        std::vector<std::size_t> x(arities_.size());
        for (std::size_t i = arities_.size(); i-- > 0;) {
            x[i] = cell % arities_[i];
            cell /= arities_[i];
        }
        return x;
    }

    std::vector<Rational> marginal(std::size_t var) const
    {
        std::vector<Rational> m(arities_.at(var));
        for (std::size_t c = 0; c < probs_.size(); ++c)
            m[outcome(c)[var]] += probs_[c];
        return m;
    }

private:
    std::vector<std::size_t> arities_;
    std::vector<Rational> probs_;
};

/// d_TV(joint, product of its marginals).
inline Rational delta_independence_gap(const FiniteJointDistribution& joint)
{
    if (joint.variables() < 2)
        throw Error(ErrorCode::InvalidArgument, "independence gap needs at least two variables");
    std::vector<std::vector<Rational>> marg;
    for (std::size_t i = 0; i < joint.variables(); ++i)
        marg.push_back(joint.marginal(i));
    Rational total = 0;
    const auto& probs = joint.probabilities();
    for (std::size_t c = 0; c < probs.size(); ++c) {
        Rational prod = 1;
        const auto x = joint.outcome(c);
        for (std::size_t i = 0; i < x.size(); ++i)
            prod *= marg[i][x[i]];
        total += abs(probs[c] - prod);
    }
    return total / 2;
}

namespace detail {
inline void require_open_half_one(const Rational& p)
{
    if (p <= half() || p >= 1)
        throw Error(ErrorCode::POutOfRange, "p = " + to_string(p) + " must satisfy 1/2 < p < 1");
}
} // namespace detail

/// P(majority of three independent bits is right) = p^3 + 3p^2(1-p).
inline Rational majority_accuracy(const Rational& p)
{
    detail::require_open_half_one(p);
    return p * p * p + 3 * p * p * (1 - p);
}

/// eta_p = majority_accuracy(p) - p.
inline Rational eta_p(const Rational& p) { return majority_accuracy(p) - p; }

/// epsilon_p = (1/100)(2p-1)(3p^2-2p^3-p).
inline Rational epsilon_p(const Rational& p)
{
    detail::require_open_half_one(p);
    return Rational(1, 100) * (2 * p - 1) * (3 * p * p - 2 * p * p * p - p);
}

/// Conditional law of one bit: P(X=1 | S=1) and P(X=0 | S=0).
struct BitConditional {
    Rational one_given_one;
    Rational zero_given_zero;

    Rational accuracy() const { return (one_given_one + zero_given_zero) / 2; }
};

using ThreeBitLaw = std::array<std::array<Rational, 8>, 2>; ///< [s][x1*4 + x2*2 + x3]

/// The product law of three conditionally independent bits.
inline ThreeBitLaw independent_three_bits(const std::array<BitConditional, 3>& bits)
{
    for (const auto& b : bits)
        for (const auto* v : {&b.one_given_one, &b.zero_given_zero})
            if (*v < 0 || *v > 1)
                throw Error(ErrorCode::InvalidConditional, "conditional probability " + to_string(*v) +
                                                               " outside [0,1]");
    ThreeBitLaw law;
    for (int s = 0; s < 2; ++s)
        for (int x = 0; x < 8; ++x) {
            Rational p = 1;
            for (int i = 0; i < 3; ++i) {
                const int xi = (x >> (2 - i)) & 1;
                const Rational right = s ? bits[i].one_given_one : bits[i].zero_given_zero;
                p *= xi == s ? right : 1 - right;
            }
            law[s][x] = p;
        }
    return law;
}

/// MAP rule for a law: 1 where P(x|S=1) > P(x|S=0), ties to 0.
inline std::array<int, 8> map_rule(const ThreeBitLaw& law)
{
    std::array<int, 8> rule{};
    for (int x = 0; x < 8; ++x)
        rule[x] = law[1][x] > law[0][x] ? 1 : 0;
    return rule;
}

/// P(rule(X) = S) with S uniform.
inline Rational rule_accuracy(const std::array<int, 8>& rule, const ThreeBitLaw& law)
{
    Rational acc = 0;
    for (int x = 0; x < 8; ++x)
        acc += law[rule[x]][x];
    return acc / 2;
}

/// Exact accuracy of the MAP estimator of S from three conditionally independent bits.
inline Rational map_three_bits(const std::array<BitConditional, 3>& bits)
{
    const auto law = independent_three_bits(bits);
    return rule_accuracy(map_rule(law), law);
}

/// max_s d_TV(a[s], b[s]) over the two conditional laws.
inline Rational conditional_tv(const ThreeBitLaw& a, const ThreeBitLaw& b)
{
    Rational worst = 0;
    for (int s = 0; s < 2; ++s)
        worst = std::max(worst, tv_distance(a[s], b[s]));
    return worst;
}

/// Far-ball independence: conditioned on S = s, the joint law of the
/// signals in B_r(G, u) and the fixpoint limit set A_{u0}; returns the
/// largest delta-independence gap over s. The finite fixpoint limit set
/// stands in for the limit action A.
struct FarBallResult {
    Rational gap;
    std::array<Rational, 2> per_state;
    int distance = 0;       ///< min(d(u0,u), d(u,u0))
    std::size_t ball_size = 0;
    int fixpoint_time = 0;
};

inline int vertex_distance(const SocialGraph& g, Vertex a, Vertex b)
{
    const int ab = g.distances_from(a)[b];
    const int ba = g.distances_from(b)[a];
    if (ab < 0)
        return ba;
    if (ba < 0)
        return ab;
    return std::min(ab, ba);
}

inline FarBallResult far_ball_independence(const SocialGraph& g, const SignalModel& model, Vertex u0, Vertex u,
                                           int r, TieBreak tiebreak, const EngineOptions& base = {})
{
    g.check_vertex(u0);
    g.check_vertex(u);
    if (r < 0)
        throw Error(ErrorCode::InvalidArgument, "radius must be non-negative");
    FarBallResult result;
    result.distance = vertex_distance(g, u0, u);
    if (result.distance >= 0 && result.distance <= 2 * r)
        throw Error(ErrorCode::VerticesTooClose, "d(u0,u) = " + std::to_string(result.distance) +
                                                     " must exceed 2r = " + std::to_string(2 * r));
    EngineOptions options = base;
    options.tiebreak = tiebreak;
    const auto run = run_exact(g, model, options);
    const int fix = run.require_fixpoint();
    result.fixpoint_time = fix;

    const auto b = ball(g, u, r);
    result.ball_size = b.size();
    const std::size_t m = model.size();
    std::vector<std::size_t> arities(b.size(), m);
    arities.push_back(3);
    std::size_t cells = 3;
    for (std::size_t i = 0; i < b.size(); ++i)
        cells *= m;
    if (cells > FiniteJointDistribution::max_cells)
        throw Error(ErrorCode::StateBudgetExceeded, "far-ball joint table exceeds 2^20 cells");

    for (int s = 0; s < 2; ++s) {
        std::vector<u128> mass(cells, 0);
        for (std::size_t p = 0; p < run.profiles(); ++p) {
            std::size_t c = 0;
            for (Vertex v : b.vertices())
                c = c * m + static_cast<std::size_t>(run.space().signal(p, v));
            c = c * 3 + static_cast<std::size_t>(run.limit_set(u0, p));
            mass[c] += run.space().weight(s, p);
        }
        std::vector<Rational> probs;
        probs.reserve(cells);
        for (auto w : mass)
            probs.push_back(ratio(w, run.space().total()));
        result.per_state[s] = delta_independence_gap(FiniteJointDistribution::make(arities, std::move(probs)));
    }
    result.gap = std::max(result.per_state[0], result.per_state[1]);
    return result;
}

struct DegreePoint {
    int degree = 0;
    Rational accuracy;   ///< exact p_center(2)
    double log_error;    ///< log(1 - p), for decay inspection
};

struct DegreeCurve {
    std::vector<DegreePoint> points;
    std::optional<double> decay_rate; ///< least-squares slope of log(1-p) against d (needs >= 2 points)
};

/// p_center(2) on star(d+1), where the center observes d leaves; d = 0 is a lone agent.
inline DegreeCurve degree_accuracy_curve(const SignalModel& model, const std::vector<int>& degrees,
                                         TieBreak tiebreak = TieBreak::own_initial(), const EngineOptions& base = {})
{
    DegreeCurve curve;
    for (int d : degrees) {
        if (d < 0)
            throw Error(ErrorCode::InvalidArgument, "degree must be non-negative");
        const auto g = d == 0 ? graphs::complete(1) : graphs::star(d + 1);
        EngineOptions options = base;
        options.tiebreak = tiebreak;
        options.t_cap = 2;
        const auto run = run_exact(g, model, options);
        const int t = std::min(2, run.rounds());
        DegreePoint pt;
        pt.degree = d;
        pt.accuracy = accuracy(run, 0, t);
        pt.log_error = std::log(to_double(1 - pt.accuracy));
        curve.points.push_back(pt);
    }
    if (curve.points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double k = static_cast<double>(curve.points.size());
        for (const auto& p : curve.points) {
            sx += p.degree;
            sy += p.log_error;
            sxx += double(p.degree) * p.degree;
            sxy += p.degree * p.log_error;
        }
        const double den = k * sxx - sx * sx;
        if (den != 0)
            curve.decay_rate = (k * sxy - sx * sy) / den;
    }
    return curve;
}

} // namespace agora

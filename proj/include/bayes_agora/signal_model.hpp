#pragma once

#include "error.hpp"
#include "rational.hpp"

#include <boost/integer/common_factor.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace agora {

/// Posterior after a single private signal, under the uniform prior on S.
struct SignalPosterior {
    Rational belief; ///< P(S = 1 | W = w)
    Rational odds;   ///< mu1(w) / mu0(w) = belief / (1 - belief)
};

/// Finite-support private-signal distributions mu0 (S = 0) and mu1 (S = 1).
///
/// Weights are exact rationals, strictly positive (mutual absolute
/// continuity), each list sums to one and mu0 != mu1. The model also keeps an
/// integer image of the weights over a common denominator so engines can
/// accumulate product measures in fixed-width integers.
class SignalModel {
public:
    static SignalModel make(std::vector<std::string> support, std::vector<Rational> mu0, std::vector<Rational> mu1)
    {
        if (mu0.size() != mu1.size() || mu0.size() != support.size())
            throw Error(ErrorCode::LengthMismatch, "support, mu0 and mu1 must have the same length");
        if (support.size() < 2)
            throw Error(ErrorCode::LengthMismatch, "support must contain at least two signals");
        Rational sum0 = 0, sum1 = 0;
        for (std::size_t i = 0; i < mu0.size(); ++i) {
            if (mu0[i] <= 0 || mu1[i] <= 0)
                throw Error(ErrorCode::WeightNotPositive,
                            "weight of signal '" + support[i] + "' must be strictly positive");
            sum0 += mu0[i];
            sum1 += mu1[i];
        }
        if (sum0 != 1 || sum1 != 1)
            throw Error(ErrorCode::WeightsDoNotSumToOne,
                        "mu0 sums to " + to_string(sum0) + ", mu1 sums to " + to_string(sum1));
        if (mu0 == mu1)
            throw Error(ErrorCode::DistributionsEqual, "mu0 and mu1 must differ");
        return SignalModel(std::move(support), std::move(mu0), std::move(mu1));
    }

    std::size_t size() const noexcept { return mu0_.size(); }
    const std::vector<std::string>& support() const noexcept { return support_; }
    const std::vector<Rational>& mu0() const noexcept { return mu0_; }
    const std::vector<Rational>& mu1() const noexcept { return mu1_; }
    const Rational& mu(int state, std::size_t signal) const { return state ? mu1_.at(signal) : mu0_.at(signal); }

    /// Least common denominator of all weights.
    const BigInt& denominator() const noexcept { return denominator_; }
    /// mu_s(w) * denominator(), as an exact integer.
    const std::vector<BigInt>& scaled(int state) const noexcept { return state ? scaled1_ : scaled0_; }

    std::size_t index_of(const std::string& label) const
    {
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (support_[i] == label)
                return i;
        throw Error(ErrorCode::UnknownSignal, "signal '" + label + "' is not in the support");
    }

    friend bool operator==(const SignalModel& a, const SignalModel& b)
    {
        return a.support_ == b.support_ && a.mu0_ == b.mu0_ && a.mu1_ == b.mu1_;
    }

private:
    SignalModel(std::vector<std::string> support, std::vector<Rational> mu0, std::vector<Rational> mu1)
        : support_(std::move(support)), mu0_(std::move(mu0)), mu1_(std::move(mu1))
    {
        denominator_ = 1;
        for (std::size_t i = 0; i < mu0_.size(); ++i) {
            denominator_ = boost::integer::lcm(denominator_, denominator_of(mu0_[i]));
            denominator_ = boost::integer::lcm(denominator_, denominator_of(mu1_[i]));
        }
        for (std::size_t i = 0; i < mu0_.size(); ++i) {
            scaled0_.push_back(numerator_of(mu0_[i]) * (denominator_ / denominator_of(mu0_[i])));
            scaled1_.push_back(numerator_of(mu1_[i]) * (denominator_ / denominator_of(mu1_[i])));
        }
    }

    std::vector<std::string> support_;
    std::vector<Rational> mu0_;
    std::vector<Rational> mu1_;
    BigInt denominator_;
    std::vector<BigInt> scaled0_;
    std::vector<BigInt> scaled1_;
};

inline SignalModel make_model(std::vector<std::string> support, std::vector<Rational> mu0, std::vector<Rational> mu1)
{
    return SignalModel::make(std::move(support), std::move(mu0), std::move(mu1));
}

/// Binary signals equal to S with probability q, 1/2 < q < 1.
inline SignalModel make_binary_model(const Rational& q)
{
    if (q <= half() || q >= 1)
        throw Error(ErrorCode::QOutOfRange, "q must satisfy 1/2 < q < 1, got " + to_string(q));
    return SignalModel::make({"0", "1"}, {q, 1 - q}, {1 - q, q});
}

/// Signals 1..m with mu1(i) = 2i/(m(m+1)) and mu0(i) = 2(m+1-i)/(m(m+1)); the
/// induced initial beliefs are i/(m+1), all distinct.
inline SignalModel make_quantile_model(int m)
{
    if (m < 2)
        throw Error(ErrorCode::MTooSmall, "quantile model needs m >= 2, got " + std::to_string(m));
    std::vector<std::string> support;
    std::vector<Rational> mu0, mu1;
    const BigInt total = BigInt(m) * (m + 1);
    for (int i = 1; i <= m; ++i) {
        support.push_back(std::to_string(i));
        mu1.emplace_back(BigInt(2 * i), total);
        mu0.emplace_back(BigInt(2 * (m + 1 - i)), total);
    }
    return SignalModel::make(std::move(support), std::move(mu0), std::move(mu1));
}

inline SignalPosterior belief_of_signal(const SignalModel& model, std::size_t signal)
{
    if (signal >= model.size())
        throw Error(ErrorCode::UnknownSignal, "signal index " + std::to_string(signal) + " out of range");
    const Rational& a = model.mu0()[signal];
    const Rational& b = model.mu1()[signal];
    return {b / (a + b), b / a};
}

inline SignalPosterior belief_of_signal(const SignalModel& model, const std::string& label)
{
    return belief_of_signal(model, model.index_of(label));
}

/// (1/2) * sum |p_i - q_i|.
inline Rational tv_distance(std::span<const Rational> p, std::span<const Rational> q)
{
    if (p.size() != q.size())
        throw Error(ErrorCode::LengthMismatch, "distributions have different lengths");
    Rational total = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        total += abs(p[i] - q[i]);
    return total / 2;
}

/// Probability that a single agent guesses S from its own signal: 1/2 + TV(mu0, mu1)/2.
inline Rational first_round_accuracy(const SignalModel& model)
{
    return half() + tv_distance(model.mu0(), model.mu1()) / 2;
}

} // namespace agora

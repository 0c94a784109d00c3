#include <bayes_agora/harness.hpp>

#include "oracle/brute_force.hpp"

#include <catch_amalgamated.hpp>

using namespace agora;

namespace {
Rational R(long long a, long long b = 1) { return Rational(a, b); }

ExperimentSpec spec_of(const std::string& text) { return spec_from_json(json::parse(text)); }
} // namespace

TEST_CASE("Wilson interval")
{
    for (auto [k, n] : std::vector<std::pair<int, int>>{{0, 10}, {10, 10}, {3, 10}, {180, 10000}, {1, 1}}) {
        auto w = wilson_interval(k, n);
        const double p = double(k) / n;
        CHECK(w.lo <= p);
        CHECK(p <= w.hi);
        CHECK(w.lo >= 0);
        CHECK(w.hi <= 1);
    }
    auto w = wilson_interval(50, 100);
    CHECK(w.lo == Catch::Approx(0.4038).margin(1e-4));
    CHECK(w.hi == Catch::Approx(0.5962).margin(1e-4));
    auto none = wilson_interval(0, 0);
    CHECK(none.lo == 0);
    CHECK(none.hi == 1);
}

TEST_CASE("spec parsing")
{
    auto s = spec_of(R"({"family":"cycle","sizes":[3,4],"model":{"kind":"quantile","m":4},
                         "tiebreak":"coin:5","engine":"local","horizon":2,"trials":10,"master_seed":9})");
    CHECK(s.family == "cycle");
    CHECK(s.tiebreak == TieBreak::seeded_coin(5));
    CHECK(s.horizon == 2);
    CHECK(spec_from_json(to_json(s)).sizes == s.sizes);
    CHECK_THROWS_AS(spec_of(R"({"family":"torus","sizes":[3]})"), Error);
    CHECK_THROWS_AS(spec_of(R"({"family":"chain","sizes":[3],"engine":"local"})"), Error);
    CHECK_THROWS_AS(spec_of(R"({"family":"chain","sizes":[3],"model":{"kind":"binary","q":"1/2"}})"), Error);
    CHECK_THROWS_AS(spec_of(R"({"sizes":[3]})"), Error);
}

TEST_CASE("exact learning curve on complete graphs")
{
    auto s = spec_of(R"({"family":"complete","sizes":[1,3,5],"model":{"kind":"binary","q":"2/3"},"trials":0})");
    auto r = learning_curve(s);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.errors.empty());
    // majority of n i.i.d. q-bits (n odd, no ties)
    auto majority = [](int n) {
        Rational total = 0;
        BigInt choose = 1;
        for (int k = 0; k <= n; ++k) {
            if (k > 0)
                choose = choose * (n - k + 1) / k;
            if (2 * k <= n)
                continue;
            Rational term(choose);
            for (int i = 0; i < k; ++i)
                term *= R(2, 3);
            for (int i = k; i < n; ++i)
                term *= R(1, 3);
            total += term;
        }
        return total;
    };
    for (const auto& row : r.rows) {
        REQUIRE(row.exact);
        CHECK(*row.exact == majority(row.n));
        CHECK(row.trials == 0);
        CHECK(row.wilson_lo == row.estimate);
    }
    CHECK(*r.rows[1].exact == R(20, 27));
}

TEST_CASE("partial results survive a failing size")
{
    auto s = spec_of(R"({"family":"chain","sizes":[3,30,4],"state_budget":100000})");
    auto r = learning_curve(s);
    CHECK(r.rows.size() == 2);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].n == 30);
    CHECK(is_budget_error(r.errors[0].code));
}

TEST_CASE("sampled rows are deterministic and bracket the exact value")
{
    auto local = spec_of(R"({"family":"complete","sizes":[3],"engine":"local","horizon":3,"trials":3000,
                             "master_seed":2024})");
    auto a = curve_csv(learning_curve(local, 1).rows);
    auto b = curve_csv(learning_curve(local, 4).rows);
    CHECK(a == b);
    auto exact = learning_curve(spec_of(R"({"family":"complete","sizes":[3]})")).rows.at(0);
    auto sampled = learning_curve(local).rows.at(0);
    CHECK(sampled.wilson_lo <= exact.estimate);
    CHECK(exact.estimate <= sampled.wilson_hi);
    CHECK(a.rfind("family,n,engine,trials,successes,estimate,wilson_lo,wilson_hi,exact,master_seed\n", 0) == 0);
}

TEST_CASE("royal family")
{
    auto check = royal_exact_check(8, R(11, 20), TieBreak::own_initial());
    CHECK(check.event_profiles == 16);
    CHECK(check.violations == 0);
    const Rational w = R(9, 20);
    CHECK(check.event_probability == w * w * w * w * w);

    RoyalOptions opt;
    opt.sizes = {10};
    opt.trials = 400;
    opt.horizon = 2;
    auto r1 = royal_family_experiment(opt, 1);
    auto r2 = royal_family_experiment(opt, 3);
    CHECK(curve_csv(r1.rows) == curve_csv(r2.rows));
    CHECK(r1.events[0].all_royals_wrong == r2.events[0].all_royals_wrong);
    CHECK_FALSE(r1.warnings.empty()); // 0.45^5 < 10/400
}

TEST_CASE("atomic chain")
{
    auto r = atomic_chain_experiment({2, 3, 4, 5}, 0, 2);
    for (const auto& c : r.checks) {
        CHECK(c.violations == 0);
        CHECK(c.stuck_pairs > 0);
        CHECK(c.non_learning >= R(1, 9));
    }
    // n = 3 against the oracle
    const auto model = make_binary_model(R(2, 3));
    auto ref = oracle::simulate(graphs::chain(3), model, r.checks[1].fixpoint_time + 1, oracle::Rule::OwnInitial);
    CHECK(r.checks[1].non_learning == 1 - oracle::learn_probability(ref));
}

TEST_CASE("agreement refinement")
{
    auto rows = agreement_refinement_experiment(graphs::chain(4), "chain", {2, 4}, TieBreak::own_initial());
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows)
        CHECK(r.violations == 0);
    auto k2 = agreement_refinement_experiment(graphs::complete(2), "complete", {2, 3, 5}, TieBreak::own_initial());
    for (const auto& r : k2) {
        CHECK(r.violations == 0);
        // any disagreement needs a tie, so it sits on tie profiles only
        CHECK(r.p_disagree <= 1);
    }
    auto csv = agreement_csv(rows, TieBreak::own_initial());
    CHECK(csv.find("chain,4,2,own-initial,") != std::string::npos);
}

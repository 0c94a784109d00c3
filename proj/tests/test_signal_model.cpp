#include <bayes_agora/config.hpp>
#include <bayes_agora/signal_model.hpp>

#include <catch_amalgamated.hpp>

using namespace agora;

namespace {
Rational R(long long a, long long b = 1) { return Rational(a, b); }

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
} // namespace

TEST_CASE("make_model validates its inputs")
{
    auto m = make_model({"a", "b"}, {R(2, 3), R(1, 3)}, {R(1, 3), R(2, 3)});
    CHECK(m.size() == 2);
    CHECK(m.denominator() == 3);
    CHECK(code_of([] { make_model({"a", "b"}, {R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}); }) ==
          ErrorCode::DistributionsEqual);
    CHECK(code_of([] { make_model({"a", "b"}, {R(1), R(0)}, {R(0), R(1)}); }) == ErrorCode::WeightNotPositive);
    CHECK(code_of([] { make_model({"a", "b"}, {R(1, 2), R(1, 3)}, {R(1, 3), R(2, 3)}); }) ==
          ErrorCode::WeightsDoNotSumToOne);
    CHECK(code_of([] { make_model({"a", "b", "c"}, {R(1, 2), R(1, 2)}, {R(1, 3), R(2, 3)}); }) ==
          ErrorCode::LengthMismatch);
    CHECK(code_of([] { make_model({"a"}, {R(1)}, {R(1)}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("binary model")
{
    auto m = make_binary_model(R(2, 3));
    CHECK(m.mu0() == std::vector<Rational>{R(2, 3), R(1, 3)});
    CHECK(m.mu1() == std::vector<Rational>{R(1, 3), R(2, 3)});
    auto d = make_binary_model(parse_rational("0.55"));
    CHECK(d.mu0() == std::vector<Rational>{R(11, 20), R(9, 20)});
    CHECK(d.mu1() == std::vector<Rational>{R(9, 20), R(11, 20)});
    CHECK(code_of([] { make_binary_model(R(1, 2)); }) == ErrorCode::QOutOfRange);
    CHECK(code_of([] { make_binary_model(R(1)); }) == ErrorCode::QOutOfRange);
}

TEST_CASE("quantile model")
{
    auto m2 = make_quantile_model(2);
    CHECK(m2.mu0() == make_binary_model(R(2, 3)).mu0());
    CHECK(m2.mu1() == make_binary_model(R(2, 3)).mu1());
    auto m3 = make_quantile_model(3);
    CHECK(m3.mu1() == std::vector<Rational>{R(1, 6), R(2, 6), R(3, 6)});
    CHECK(m3.mu0() == std::vector<Rational>{R(3, 6), R(2, 6), R(1, 6)});
    CHECK(belief_of_signal(m3, 0).belief == R(1, 4));
    CHECK(belief_of_signal(m3, 1).belief == R(1, 2));
    CHECK(belief_of_signal(m3, 2).belief == R(3, 4));
    CHECK(code_of([] { make_quantile_model(1); }) == ErrorCode::MTooSmall);

    for (int m = 2; m <= 16; ++m) {
        auto q = make_quantile_model(m);
        Rational s0 = 0, s1 = 0;
        std::set<Rational> beliefs;
        for (std::size_t i = 0; i < q.size(); ++i) {
            s0 += q.mu0()[i];
            s1 += q.mu1()[i];
            const auto b = belief_of_signal(q, i).belief;
            CHECK(b == R(static_cast<long long>(i) + 1, m + 1));
            beliefs.insert(b);
        }
        CHECK(s0 == 1);
        CHECK(s1 == 1);
        CHECK(beliefs.size() == static_cast<std::size_t>(m));
    }
}

TEST_CASE("belief_of_signal")
{
    auto m = make_binary_model(R(2, 3));
    auto post = belief_of_signal(m, "1");
    CHECK(post.belief == R(2, 3));
    CHECK(post.odds == 2);
    CHECK(post.belief == post.odds / (1 + post.odds));
    CHECK(code_of([&] { belief_of_signal(m, "7"); }) == ErrorCode::UnknownSignal);
    CHECK(code_of([&] { belief_of_signal(m, std::size_t{2}); }) == ErrorCode::UnknownSignal);

    // strictly inside (0,1) and invariant under relabeling the support
    auto a = make_model({"x", "y", "z"}, {R(1, 2), R(1, 3), R(1, 6)}, {R(1, 6), R(1, 3), R(1, 2)});
    auto b = make_model({"z", "x", "y"}, {R(1, 6), R(1, 2), R(1, 3)}, {R(1, 2), R(1, 6), R(1, 3)});
    for (const char* label : {"x", "y", "z"}) {
        CHECK(belief_of_signal(a, label).belief == belief_of_signal(b, label).belief);
        CHECK(belief_of_signal(a, label).belief > 0);
        CHECK(belief_of_signal(a, label).belief < 1);
    }
    CHECK(belief_of_signal(a, "y").belief == R(1, 2));
}

TEST_CASE("tv_distance and first_round_accuracy")
{
    std::vector<Rational> p{R(2, 3), R(1, 3)}, q{R(1, 3), R(2, 3)};
    CHECK(tv_distance(p, p) == 0);
    CHECK(tv_distance(p, q) == R(1, 3));
    std::vector<Rational> h{R(1, 2), R(1, 2)}, n{R(9, 10), R(1, 10)};
    CHECK(tv_distance(h, n) == R(2, 5));
    std::vector<Rational> three{R(1, 3), R(1, 3), R(1, 3)};
    CHECK(code_of([&] { tv_distance(p, three); }) == ErrorCode::LengthMismatch);

    CHECK(first_round_accuracy(make_binary_model(R(2, 3))) == R(2, 3));
    CHECK(first_round_accuracy(make_quantile_model(3)) == R(2, 3));
    auto weak = make_binary_model(R(1000001, 2000000));
    CHECK(first_round_accuracy(weak) > R(1, 2));
    CHECK(first_round_accuracy(weak) == R(1000001, 2000000));
}

TEST_CASE("rational parsing and formatting")
{
    CHECK(parse_rational("2/3") == R(2, 3));
    CHECK(parse_rational("0.55") == R(11, 20));
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational(" 4/6 ") == R(2, 3));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK(to_string(R(4, 6)) == "2/3");
    CHECK(to_decimal(R(2, 3)) == "0.666666666667");
    CHECK(to_decimal(R(1, 8), 2) == "0.13");
    CHECK(to_decimal(R(-1, 3), 3) == "-0.333");
}

TEST_CASE("model JSON literals")
{
    CHECK(parse_model(R"({"kind":"binary","q":"2/3"})") == make_binary_model(R(2, 3)));
    CHECK(parse_model(R"({"kind":"quantile","m":8})") == make_quantile_model(8));
    auto e = parse_model(R"({"kind":"explicit","mu0":["2/3","1/3"],"mu1":["1/3","2/3"]})");
    CHECK(e.mu0() == make_binary_model(R(2, 3)).mu0());
    CHECK(model_from_json(model_to_json(make_quantile_model(5))) == make_quantile_model(5));
    CHECK_THROWS_AS(parse_model("{"), Error);
    CHECK_THROWS_AS(parse_model(R"({"kind":"gaussian"})"), Error);
    CHECK(code_of([] { parse_model(R"({"kind":"binary","q":"1/2"})"); }) == ErrorCode::QOutOfRange);
}

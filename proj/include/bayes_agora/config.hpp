#pragma once

// JSON model literals:
//   {"kind":"binary","q":"2/3"}
//   {"kind":"quantile","m":8}
//   {"kind":"explicit","mu0":["2/3","1/3"],"mu1":["1/3","2/3"]}   (optional "support")
// Rationals are strings; plain JSON numbers are accepted when integral.

#include "signal_model.hpp"
#include "tiebreak.hpp"

#include <nlohmann/json.hpp>

namespace agora {

using json = nlohmann::json;

inline Rational rational_from_json(const json& j, const std::string& what)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    throw Error(ErrorCode::ParseError, what + ": expected a rational string such as \"2/3\"");
}

inline SignalModel model_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("kind"))
        throw Error(ErrorCode::ParseError, "model literal must be an object with a \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "binary") {
        if (!j.contains("q"))
            throw Error(ErrorCode::ParseError, "binary model needs \"q\"");
        return make_binary_model(rational_from_json(j.at("q"), "q"));
    }
    if (kind == "quantile") {
        if (!j.contains("m") || !j.at("m").is_number_integer())
            throw Error(ErrorCode::ParseError, "quantile model needs an integer \"m\"");
        return make_quantile_model(j.at("m").get<int>());
    }
    if (kind == "explicit") {
        if (!j.contains("mu0") || !j.contains("mu1") || !j.at("mu0").is_array() || !j.at("mu1").is_array())
            throw Error(ErrorCode::ParseError, "explicit model needs arrays \"mu0\" and \"mu1\"");
        std::vector<Rational> mu0, mu1;
        for (const auto& x : j.at("mu0"))
            mu0.push_back(rational_from_json(x, "mu0"));
        for (const auto& x : j.at("mu1"))
            mu1.push_back(rational_from_json(x, "mu1"));
        std::vector<std::string> support;
        if (j.contains("support"))
            for (const auto& x : j.at("support"))
                support.push_back(x.is_string() ? x.get<std::string>() : x.dump());
        else
            for (std::size_t i = 0; i < mu0.size(); ++i)
                support.push_back(std::to_string(i));
        return make_model(std::move(support), std::move(mu0), std::move(mu1));
    }
    throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "' (binary, quantile, explicit)");
}

inline SignalModel parse_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model literal is not valid JSON: ") + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model literal: ") + e.what());
    }
}

/// Explicit form of any model, with rationals as "num/den" strings.
inline json model_to_json(const SignalModel& model)
{
    json j;
    j["kind"] = "explicit";
    j["support"] = model.support();
    for (int s = 0; s < 2; ++s) {
        json arr = json::array();
        for (const auto& w : s ? model.mu1() : model.mu0())
            arr.push_back(to_string(w));
        j[s ? "mu1" : "mu0"] = arr;
    }
    return j;
}

} // namespace agora

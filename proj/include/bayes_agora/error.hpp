#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agora {

enum class ErrorCode {
    // signal model
    WeightNotPositive,
    WeightsDoNotSumToOne,
    DistributionsEqual,
    LengthMismatch,
    QOutOfRange,
    MTooSmall,
    UnknownSignal,
    // graphs
    UnknownVertex,
    NTooSmall,
    DisconnectedAfterRetries,
    NotSimple,
    NotStronglyConnected,
    // engines
    StateBudgetExceeded,
    BallBudgetExceeded,
    WeightPrecisionExceeded,
    TimeOutOfRange,
    FixpointNotReached,
    // stats
    POutOfRange,
    InvalidConditional,
    InvalidDistribution,
    VerticesTooClose,
    // plumbing
    ParseError,
    IoError,
    InvalidArgument,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::WeightNotPositive: return "WeightNotPositive";
    case ErrorCode::WeightsDoNotSumToOne: return "WeightsDoNotSumToOne";
    case ErrorCode::DistributionsEqual: return "DistributionsEqual";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::MTooSmall: return "MTooSmall";
    case ErrorCode::UnknownSignal: return "UnknownSignal";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NTooSmall: return "NTooSmall";
    case ErrorCode::DisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::BallBudgetExceeded: return "BallBudgetExceeded";
    case ErrorCode::WeightPrecisionExceeded: return "WeightPrecisionExceeded";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::FixpointNotReached: return "FixpointNotReached";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::InvalidConditional: return "InvalidConditional";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::VerticesTooClose: return "VerticesTooClose";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// True for errors that mean "the input is fine but too large to compute".
inline bool is_budget_error(ErrorCode code)
{
    return code == ErrorCode::StateBudgetExceeded || code == ErrorCode::BallBudgetExceeded ||
           code == ErrorCode::WeightPrecisionExceeded;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace agora

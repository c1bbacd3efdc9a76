#include "rpu/errors.hpp"

namespace rpu {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroMarginal: return "ZeroMarginal";
        case ErrorCode::DuplicateMessage: return "DuplicateMessage";
        case ErrorCode::UncoveredOutcome: return "UncoveredOutcome";
        case ErrorCode::MarginalNotNormalized: return "MarginalNotNormalized";
        case ErrorCode::EmptyMessage: return "EmptyMessage";
        case ErrorCode::InvalidStrategy: return "InvalidStrategy";
        case ErrorCode::ZeroMassMessage: return "ZeroMassMessage";
        case ErrorCode::InvalidLoss: return "InvalidLoss";
        case ErrorCode::NonPositiveScale: return "NonPositiveScale";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::DidNotConverge: return "DidNotConverge";
        case ErrorCode::UnsupportedLoss: return "UnsupportedLoss";
        case ErrorCode::NoFeasibleResponse: return "NoFeasibleResponse";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroMarginal:
        case ErrorCode::DuplicateMessage:
        case ErrorCode::UncoveredOutcome:
        case ErrorCode::MarginalNotNormalized:
        case ErrorCode::EmptyMessage:
        case ErrorCode::InvalidStrategy:
        case ErrorCode::InvalidLoss:
        case ErrorCode::NonPositiveScale:
        case ErrorCode::NotApplicable:
        case ErrorCode::ParseError:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

}  // namespace rpu

#pragma once

#include <stdexcept>
#include <string>

namespace rpu {

enum class ErrorCode {
    ZeroMarginal,
    DuplicateMessage,
    UncoveredOutcome,
    MarginalNotNormalized,
    EmptyMessage,
    InvalidStrategy,
    ZeroMassMessage,
    InvalidLoss,
    NonPositiveScale,
    NotApplicable,
    ConstructionFailed,
    DidNotConverge,
    UnsupportedLoss,
    NoFeasibleResponse,
    TooLarge,
    ParseError,
};

const char* error_code_name(ErrorCode code);

// Validation-class errors map to CLI exit code 2, the rest to 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rpu

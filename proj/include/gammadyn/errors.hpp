#pragma once

#include <stdexcept>
#include <string>

namespace gammadyn {

/// Failure codes shared by the library and the CLI exit-code mapping.
enum class ErrorCode {
    InvalidInput,
    EmptySupport,
    NonFiniteValue,
    BlockOutOfRange,
    AllZero,
    Coverable,
    ExtractionFailed,
    NotPairwiseIndependent,
    RejectionBudgetExceeded,
    NoTrend,
    SingularBasis,
    CoordinateExhausted,
    MBudgetExceeded,
    PhaseBudgetExceeded,
    TargetUnreachable,
    NotASymmetry,
    RationalAngle,
    BoundViolated,
    ReportFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::EmptySupport: return "EmptySupport";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::BlockOutOfRange: return "BlockOutOfRange";
        case ErrorCode::AllZero: return "AllZero";
        case ErrorCode::Coverable: return "Coverable";
        case ErrorCode::ExtractionFailed: return "ExtractionFailed";
        case ErrorCode::NotPairwiseIndependent: return "NotPairwiseIndependent";
        case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
        case ErrorCode::NoTrend: return "NoTrend";
        case ErrorCode::SingularBasis: return "SingularBasis";
        case ErrorCode::CoordinateExhausted: return "CoordinateExhausted";
        case ErrorCode::MBudgetExceeded: return "MBudgetExceeded";
        case ErrorCode::PhaseBudgetExceeded: return "PhaseBudgetExceeded";
        case ErrorCode::TargetUnreachable: return "TargetUnreachable";
        case ErrorCode::NotASymmetry: return "NotASymmetry";
        case ErrorCode::RationalAngle: return "RationalAngle";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::ReportFailure: return "ReportFailure";
    }
    return "Unknown";
}

} // namespace gammadyn

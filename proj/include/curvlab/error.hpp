#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvlab {

enum class ErrorCode {
    InvalidParams,
    ShootingFailed,
    GridMismatch,
    PoleEvaluationFailed,
    OutOfRange,
    NonPositiveMetric,
    StepRejected,
    BlowUp,
    ReproductionFailed,
    InvalidConfig,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::ShootingFailed: return "ShootingFailed";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::PoleEvaluationFailed: return "PoleEvaluationFailed";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonPositiveMetric: return "NonPositiveMetric";
        case ErrorCode::StepRejected: return "StepRejected";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::ReproductionFailed: return "ReproductionFailed";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace curvlab

#ifndef BIORTH_ERROR_HPP
#define BIORTH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace biorth {

enum class ErrorCode {
    ScaleMismatch,
    IndexOutOfRange,
    PreconditionViolated,
    UpgradeAfterRemoval,
    NotActive,
    LastElement,
    EmptyActive,
    MomentShortfall,
    NonUniformGrid,
    EvenPanelParity,
    UnsupportedSpace,
    SingularToWorkingPrecision,
    InvalidArgument,
    MalformedInput,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UpgradeAfterRemoval: return "UpgradeAfterRemoval";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::LastElement: return "LastElement";
    case ErrorCode::EmptyActive: return "EmptyActive";
    case ErrorCode::MomentShortfall: return "MomentShortfall";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::EvenPanelParity: return "EvenPanelParity";
    case ErrorCode::UnsupportedSpace: return "UnsupportedSpace";
    case ErrorCode::SingularToWorkingPrecision: return "SingularToWorkingPrecision";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

/// Library error. Every failure path in biorth throws this with a code the
/// caller can switch on; the message carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace biorth

#endif // BIORTH_ERROR_HPP

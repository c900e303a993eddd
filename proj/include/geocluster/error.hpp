#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geocluster {

enum class ErrorCode {
    InvalidArgument,
    InvalidAlpha,
    InvalidSigma,
    NoContacts,
    ZeroScale,
    ZeroStrength,
    ConvergenceFailure,
    DegenerateInput,
    EmptyGraph,
    DimensionMismatch,
    LengthMismatch,
    DegenerateCounts,
    InsufficientZeros,
    CalibrationFailure,
    ParseError,
    UnknownId,
    SelfContact,
    MissingLabel,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace geocluster

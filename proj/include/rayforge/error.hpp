#pragma once

#include <stdexcept>
#include <string>

namespace rayforge {

enum class ErrorCode {
    InvalidArgument,
    Overflow,
    NotACycle,
    UnsupportedFamily,
    RadiusTooSmall,
    NotConverged,
    DivergentHead,
    ContinuationAmbiguous,
    NotAFixedPoint,
    NotRepelling,
    OnBoundary,
    NotInPreimage,
    OmittedValue,
    NotPostsingularlyFinite,
    NoAuxiliaryFixedPoint,
    DegenerateInput,
    Parse,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace rayforge

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyflow {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    UnsupportedMeasure,
    NotRealValued,
    EmptyGrid,
    NonpositiveDt,
    OutOfHorizon,
    NyquistViolation,
    ExponentOutOfRange,
    GridMismatch,
    BetaOutOfRange,
    ConfigInvalid,
    ConfigParse,
    NoAliveParticles,
    SolverDiverged,
    InvariantViolation,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) raise(code, what);
}

} // namespace levyflow

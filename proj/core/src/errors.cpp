#include "levyflow/errors.hpp"

namespace levyflow {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedMeasure: return "UnsupportedMeasure";
    case ErrorCode::NotRealValued: return "NotRealValued";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NonpositiveDt: return "NonpositiveDt";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::NoAliveParticles: return "NoAliveParticles";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace levyflow

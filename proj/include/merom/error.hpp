#ifndef MEROM_ERROR_HPP
#define MEROM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace merom {

enum class errc {
    parse_error,
    precision_loss,
    division_by_zero,
    zero_input,
    rational_radius,
    twist_mismatch,
    missing_constant_term,
    precondition_violated,
    no_convergence,
    shape_mismatch,
    pole_outside_divisor,
    invariant_violation,
    cyclic_search_failed,
    genericity_failure,
    unprepared_eigenvalues,
    resonant_eigenvalues,
    insufficient_samples,
    span_mismatch,
    not_implemented,
    dimension_unsupported,
    pole_escape,
    internal_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::parse_error: return "ParseError";
        case errc::precision_loss: return "PrecisionLoss";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::zero_input: return "ZeroInput";
        case errc::rational_radius: return "RationalRadius";
        case errc::twist_mismatch: return "TwistMismatch";
        case errc::missing_constant_term: return "MissingConstantTerm";
        case errc::precondition_violated: return "PreconditionViolated";
        case errc::no_convergence: return "NoConvergence";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::pole_outside_divisor: return "PoleOutsideDivisor";
        case errc::invariant_violation: return "InvariantViolation";
        case errc::cyclic_search_failed: return "CyclicSearchFailed";
        case errc::genericity_failure: return "GenericityFailure";
        case errc::unprepared_eigenvalues: return "UnpreparedEigenvalues";
        case errc::resonant_eigenvalues: return "ResonantEigenvalues";
        case errc::insufficient_samples: return "InsufficientSamples";
        case errc::span_mismatch: return "SpanMismatch";
        case errc::not_implemented: return "NotImplemented";
        case errc::dimension_unsupported: return "DimensionUnsupported";
        case errc::pole_escape: return "PoleEscape";
        case errc::internal_error: return "InternalError";
    }
    return "InternalError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

} // namespace merom

#endif

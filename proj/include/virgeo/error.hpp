#ifndef VIRGEO_ERROR_HPP
#define VIRGEO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace virgeo {

/// Error codes for the domain and numerical failure modes of the library.
enum class errc {
    // series / algebra
    degenerate_divisor,
    composition_domain,
    not_invertible,
    branch_point,
    logarithmic_term,
    truncation_insufficient,
    // circle maps
    not_a_diffeo,
    inversion_diverged,
    flow_unstable,
    not_a_probability_density,
    // flag space
    degenerate_triple,
    unsupported_subsymmetry,
    limit_diverged,
    // Neretin semigroup
    not_contracting,
    welding_diverged,
    gauge_singular,
    split_limit,
    branch_ambiguity,
    not_immersive,
    not_jordan,
    // matrices
    not_symmetric,
    // generic
    bad_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::degenerate_divisor: return "DegenerateDivisor";
        case errc::composition_domain: return "CompositionDomain";
        case errc::not_invertible: return "NotInvertible";
        case errc::branch_point: return "BranchPoint";
        case errc::logarithmic_term: return "LogarithmicTerm";
        case errc::truncation_insufficient: return "TruncationInsufficient";
        case errc::not_a_diffeo: return "NotADiffeo";
        case errc::inversion_diverged: return "InversionDiverged";
        case errc::flow_unstable: return "FlowUnstable";
        case errc::not_a_probability_density: return "NotAProbabilityDensity";
        case errc::degenerate_triple: return "DegenerateTriple";
        case errc::unsupported_subsymmetry: return "UnsupportedSubsymmetry";
        case errc::limit_diverged: return "LimitDiverged";
        case errc::not_contracting: return "NotContracting";
        case errc::welding_diverged: return "WeldingDiverged";
        case errc::gauge_singular: return "GaugeSingular";
        case errc::split_limit: return "SplitLimit";
        case errc::branch_ambiguity: return "BranchAmbiguity";
        case errc::not_immersive: return "NotImmersive";
        case errc::not_jordan: return "NotJordan";
        case errc::not_symmetric: return "NotSymmetric";
        case errc::bad_input: return "BadInput";
    }
    return "Unknown";
}

/// True for failures of an iterative numerical process (as opposed to a
/// violated mathematical precondition).  The CLI maps the two classes to
/// different exit codes.
inline bool errc_is_divergence(errc c) {
    switch (c) {
        case errc::inversion_diverged:
        case errc::flow_unstable:
        case errc::limit_diverged:
        case errc::welding_diverged:
        case errc::split_limit:
        case errc::branch_ambiguity:
            return true;
        default:
            return false;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }
    bool is_divergence() const { return errc_is_divergence(code_); }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

} // namespace virgeo

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace wavestab {

enum class ErrorCode {
    Domain,
    SingularSlaving,
    Usage,
    InvalidSystem,
    NoSaddle,
    NoCenter,
    NoConjugate,
    PatternViolation,
    MuOutOfRange,
    RootBracketFailure,
    AssumptionViolation,
    PerturbationLeavesWindow,
    DegenerateAlpha0,
    DegenerateSlaving,
    SingularBasis,
    NonpositiveAlpha,
    Config,
};

const char* to_string(ErrorCode code);

class WaveError : public std::runtime_error {
public:
    WaveError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wavestab

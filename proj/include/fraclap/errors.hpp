#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclap {

/// Bad user input: wrong sizes, out-of-range parameters, malformed files.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract of some operation was violated.
class NumericalError : public std::runtime_error {
public:
    enum class Kind {
        NonRealSpectrum,
        PositiveEigenvalue,
        SingularEigenvectors,
        SingularMatrix,
        PositiveEntry,
        PoleError,
        NoConvergence,
        MemoryGuard,
        NonFiniteState,
        DegenerateExponent,
    };

    NumericalError(Kind kind, const std::string& detail)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

    static constexpr std::string_view kind_name(Kind kind) noexcept {
        switch (kind) {
            case Kind::NonRealSpectrum: return "NonRealSpectrum";
            case Kind::PositiveEigenvalue: return "PositiveEigenvalue";
            case Kind::SingularEigenvectors: return "SingularEigenvectors";
            case Kind::SingularMatrix: return "SingularMatrix";
            case Kind::PositiveEntry: return "PositiveEntry";
            case Kind::PoleError: return "PoleError";
            case Kind::NoConvergence: return "NoConvergence";
            case Kind::MemoryGuard: return "MemoryGuard";
            case Kind::NonFiniteState: return "NonFiniteState";
            case Kind::DegenerateExponent: return "DegenerateExponent";
        }
        return "NumericalError";
    }

private:
    Kind kind_;
};

}  // namespace fraclap

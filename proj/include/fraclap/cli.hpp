#pragma once

#include <iosfwd>

namespace fraclap {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 bad parameters, 2 numerical-contract violation.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap

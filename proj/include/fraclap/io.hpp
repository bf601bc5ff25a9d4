#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "fraclap/evolution.hpp"
#include "fraclap/ndarray.hpp"

namespace fraclap {

/// Shortest text that round-trips a double: printf "%.17g".
std::string format_double(double v);

/// Path of the JSON shape sidecar that accompanies an array CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// One row "i_1,...,i_n,value" per tuple in TupleWalker order, with a header
/// line, plus the sidecar {"shape": [...]}.
void write_ndarray_csv(const std::filesystem::path& csv, const NdArray& U);

/// Reads a file written by write_ndarray_csv (shape from the sidecar).
NdArray read_ndarray_csv(const std::filesystem::path& csv);

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Keys: n, s, p, N, L, dt, t_end, snapshots (comma list), byte_budget.
EvolutionConfig evolution_config_from(const KeyValues& kv);

}  // namespace fraclap

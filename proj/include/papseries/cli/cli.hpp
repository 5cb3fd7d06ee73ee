#pragma once

#include "papseries/series/series.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

namespace papseries {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitComputation = 2, kExitResource = 3 };

/// A series named on the command line: a dataset key, a b-file or JSON path,
/// or a built-in generator (catalan[:N], geometric:q[:N], random[:N],
/// dyck:y[:N]).
using SeriesRef = std::variant<ExactSeries, RationalSeries>;
SeriesRef resolve_series(const std::string& ref, std::uint64_t seed);

/// Runs the command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace papseries

#pragma once

#include "levydim/config.hpp"
#include "levydim/report.hpp"

#include <iosfwd>

namespace levydim {

// Exit-code contract (stable across versions; scriptable in CI sweeps):
//   hit:      0 = Converges, 10 = Diverges, 20 = Inconclusive, 1 = error
//   dim:      0 = ok, 2 = monotonicity violation (report retained), 1 = error
//   simulate: 0 = ok, 3 = unsupported exponent leaf, 1 = error
//   estimate: 0 = ok, 1 = missing/incompatible input files
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMonotonicity = 2;
inline constexpr int kExitUnsupportedLeaf = 3;
inline constexpr int kExitDiverges = 10;
inline constexpr int kExitInconclusive = 20;

struct CommandResult {
    Report report;
    int exit_code = kExitOk;
};

CommandResult cmd_hit(const RunConfig& cfg);
CommandResult cmd_dim(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_estimate(const RunConfig& cfg);

/// Runs the quadrature calibration and sandwich-bound suites, printing one
/// pass/fail line per check. Returns the number of failures.
int run_selftest(std::ostream& os, std::uint64_t seed, int threads);

} // namespace levydim

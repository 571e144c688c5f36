#pragma once

#include <ostream>

namespace qfield::io {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Entry point for the `qfield` command line:
///   evolve         --config F --out CSV [--snapshots DIR --every N]
///   diagnose       --in SNAP [--nmax N]
///   boost          --in SNAP --v V --out SNAP
///   stationary     --config F --count K --out CSV
///   compare-oracle --config F --out CSV
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfield::io

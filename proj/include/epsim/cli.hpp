#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "epsim/diagnostics.hpp"
#include "epsim/experiments.hpp"

namespace epsim {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Column names of the per-run diagnostics CSV, in order.
const std::vector<std::string>& diagnostics_columns();
/// Column names of the sweep CSV, in order.
const std::vector<std::string>& sweep_columns();

/// One row per record; mom_y is 0 in 1D.
void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRecord> records);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

std::string usage_text();

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 pass, 1 experiment failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epsim

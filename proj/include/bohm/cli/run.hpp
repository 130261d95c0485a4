#pragma once

#include <iosfwd>

#include "bohm/cli/config.hpp"

namespace bohm::cli {

enum ExitCode : int { kSuccess = 0, kInvalidRun = 1, kValidationError = 2, kIoError = 3 };

/// Runs the preset and writes report.json, manifest.json and any extra files
/// into cfg.out. Returns kSuccess, kInvalidRun or kIoError.
int run(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point: parse flags and config file, validate, run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bohm::cli

#pragma once

#include <string>

#include "qplab_cli/config.hpp"

namespace qplab::cli {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Writes resolved_config.json and the command's CSV files into out_dir.
// Returns kExitNumerical when a numerical-quality probe fails after the data
// were written; library errors propagate.
int run(const RunConfig& config, const std::string& out_dir);

// Maps a library error to an exit code: invalid requests are 2, numerical
// failures (convergence, conditioning, data quality, internal probes) are 3.
int exit_code_for(const std::exception& e);

}  // namespace qplab::cli

#pragma once

#include "cli/run.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace srsp::cli {

const std::vector<std::string>& subcommands();

/**
 * Loads the config, runs one subcommand and returns its exit code:
 * 0 success, 2 configuration error, 3 numerical failure, 4 unbounded detected,
 * 5 verification failed. Errors are reported on err, never thrown.
 */
int execute(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace srsp::cli

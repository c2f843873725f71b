#pragma once

// Subcommand dispatch for the gapcount tool.
//
// Exit status: 0 success, 1 configuration or input error, 2 numerical
// failure, 3 a verification campaign found violations.

#include <iosfwd>
#include <string>
#include <vector>

#include "gapcount/cli/config.hpp"
#include "gapcount/ltsums.hpp"

namespace gapcount::cli {

const char* version();

/// Subcommands in the order they are listed by --help.
const std::vector<std::string>& subcommands();

struct RunOptions {
  std::string out;     // output path; empty picks <command>.csv or .json
  std::string format;  // csv or json; empty infers from the extension of out
  bool dry_run = false;
  bool timestamp = true;
};

/// Runs one subcommand on an already merged configuration and writes its
/// output file. Library errors propagate; the return value is the exit status.
int run_subcommand(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& log);

/// Sum identity at every finite edge of every component of the complement of
/// the bands, using the [ltsum] section of cfg.
std::vector<SumIdentityResult> sum_identity_checks(const ExperimentConfig& cfg);

/// Command-line entry point with error-to-exit-status mapping.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gapcount::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qev::harness {

/// Command-line entry point. Subcommands: bounds, run, replay, experiment,
/// fig1. Returns 0 on success/pass, 1 on experiment or replay failure, 2 on
/// configuration or usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qev::harness

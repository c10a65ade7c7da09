#pragma once

#include <iosfwd>

#include "helispin/run_config.hpp"

namespace helispin {

// Subcommand bodies. Each returns a process exit code (see exit_code) and
// reports problems on `err`; normal output goes to `out` line-oriented and
// stable across runs for identical inputs.

int cmd_simulate(RunConfig config, std::ostream& out, std::ostream& err);
int cmd_sweep(RunConfig config, std::ostream& out, std::ostream& err);
int cmd_verify(RunConfig config, std::ostream& out, std::ostream& err);
int cmd_overlay(RunConfig config, std::ostream& out, std::ostream& err);

}  // namespace helispin

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linref {

/// Runs one CLI command. args excludes the program name. Returns the
/// process exit code: 0 when the check/refinement holds or the
/// exploration/repro succeeds, 1 when a verdict is negative (the
/// counterexample is printed), 2 on usage, parse or budget errors.
/// Subcommands:
///   check   --history FILE [--spec stack] [--mode sc|lin] [--json]
///   explore OBJECT --program NAME|FILE [--budget N] [--json]
///   refine  --program NAME|FILE --abstract OBJECT --concrete OBJECT
///           [--mode trace|final] [--budget N] [--json]
///   repro   example1|sc2-counterexample|sc2-treiber|lin-vs-sc
/// OBJECT selectors: treiber, atomic-stack, sc-stack. Program builtins:
/// example1, sc2; anything else is read as a DSL file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linref

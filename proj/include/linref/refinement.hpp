#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linref/client_lang.hpp"
#include "linref/explorer.hpp"
#include "linref/object_machine.hpp"

namespace linref {

enum class RefinementMode { Trace, FinalState };

/// Outcome of a refinement check. A counterexample is present iff the
/// refinement fails; it is produced by the concrete side and not by the
/// abstract side — a full trace in Trace mode, a single-valuation
/// sequence in FinalState mode.
struct RefinementVerdict {
  bool holds = true;
  RefinementMode mode = RefinementMode::Trace;
  std::optional<ObservableTrace> counterexample;
};

/// Contextual trace refinement with respect to p: every observable trace
/// of p composed with concrete_o is one of p composed with abstract_o.
/// On failure reports the smallest missing concrete trace (by length,
/// then lexicographically), which keeps output stable for golden tests.
RefinementVerdict contextual_refines(const ClientProgram& p, const MachinePtr& abstract_o,
                                     const MachinePtr& concrete_o,
                                     const ExploreOptions& opts = {});

/// Observational refinement: the same inclusion restricted to final
/// valuations (initial states coincide trivially — same program).
RefinementVerdict observational_refines(const ClientProgram& p, const MachinePtr& abstract_o,
                                        const MachinePtr& concrete_o,
                                        const ExploreOptions& opts = {});

/// Human-readable table of per-program verdicts. Refinement against
/// every client program is not decidable by enumeration; this merely
/// aggregates the per-program evidence.
std::string quantified_note(
    const std::vector<std::pair<std::string, RefinementVerdict>>& results);

/// {"holds":bool,"mode":"trace"|"final","counterexample":[[x,y,z],...]|null}
std::string verdict_to_json(const RefinementVerdict& v);

/// "(0,0,0) -> (1,0,0) -> ..." rendering shared by table and CLI output.
std::string trace_to_string(const ObservableTrace& t);

}  // namespace linref

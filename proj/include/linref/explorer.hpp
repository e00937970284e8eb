#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "linref/client_lang.hpp"
#include "linref/history.hpp"
#include "linref/object_machine.hpp"
#include "linref/value.hpp"

namespace linref {

/// Sequence of shared-variable valuations, stutter-reduced (no two
/// adjacent elements equal), starting at the program's init valuation.
using ObservableTrace = std::vector<Valuation>;

struct ExploreOptions {
  std::size_t state_budget = 1'000'000;  // distinct global states
  bool reverse_successor_order = false;  // scheduling-order knob for determinism tests
  bool collect_histories = false;        // also gather the emitted complete histories
};

struct ExploreStats {
  std::size_t states = 0;      // distinct global states visited
  std::uint64_t executions = 0;  // terminated (and retained) executions
  std::size_t traces = 0;
  std::size_t max_depth = 0;   // longest execution in atomic steps
};

struct BudgetExceededError : std::runtime_error {
  std::size_t states;
  explicit BudgetExceededError(std::size_t states)
      : std::runtime_error("budget exceeded: " + std::to_string(states) + " states visited"),
        states(states) {}
};

/// Observable traces of the terminated executions of p composed with o.
/// traces and finals are sorted (length, then lexicographic) and
/// deduplicated; histories (when collected) likewise.
struct TraceSet {
  std::vector<std::string> variables;  // shared names, declaration order
  std::vector<ObservableTrace> traces;
  std::vector<Valuation> finals;
  std::vector<History> histories;
  ExploreStats stats;
};

/// Exhaustive deterministic DFS over all scheduler interleavings of p
/// against machine o. Enabled steps per thread: an Assign statement
/// (atomic); a Call statement's invocation; one object-internal step of
/// a waiting call; or, at the frame's return point, response plus
/// result assignment as one step. Object-internal nondeterminism
/// multiplies successors. Executions the machine refuses to retain
/// (sc_oracle's SC filter) are discarded. States are deduplicated by
/// canonical serialization and trace suffixes are memoized per state, so
/// the cost is bounded by the state graph, not the execution tree.
/// Throws BudgetExceededError past opts.state_budget distinct states.
TraceSet explore(const ClientProgram& p, const MachinePtr& o, const ExploreOptions& opts = {});

/// The final-valuation projection of explore(p, o).
std::vector<Valuation> final_states(const ClientProgram& p, const MachinePtr& o,
                                    const ExploreOptions& opts = {});

/// Exploration telemetry (for docs and budget tuning).
ExploreStats count_states(const ClientProgram& p, const MachinePtr& o,
                          const ExploreOptions& opts = {});

/// Collapses adjacent equal valuations; idempotent.
ObservableTrace stutter_reduce(const ObservableTrace& trace);

}  // namespace linref

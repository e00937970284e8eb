#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "linref/history.hpp"
#include "linref/seq_spec.hpp"

namespace linref {

enum class CheckMode : std::uint8_t { SequentialConsistency, Linearizability };

/// Outcome of a consistency check. `holds` iff `witness` is present; the
/// witness is then a complete, legal sequential history over the checked
/// operations (with the original op_instance ids), preserving per-thread
/// order and, in Linearizability mode, real-time precedence.
struct Verdict {
  bool holds = false;
  std::optional<History> witness;
  std::string note;
};

struct InvalidHistoryError : std::invalid_argument {
  explicit InvalidHistoryError(HistoryViolation v)
      : std::invalid_argument("invalid history at event " + std::to_string(v.event_index) +
                              ": " + v.message),
        violation(std::move(v)) {}

  HistoryViolation violation;
};

struct OracleBoundError : std::length_error {
  OracleBoundError() : std::length_error("oracle bound") {}
};

/// Reusable buffers for the optimized checker. Hot loops that check many
/// histories keep one instance alive to avoid per-check allocation; the
/// contents are an implementation detail.
struct CheckerScratch {
  struct Call {
    int thread_slot = 0;
    int idx_in_thread = 0;
    int inv_idx = 0;
    int resp_idx = -1;
    int op_instance = -1;
    int thread_id = 0;
    std::string_view op;  // view into the checked history's events
    Value arg;
    Value ret;
    bool active = false;
  };

  std::vector<Call> calls;
  std::vector<int> thread_ids;    // slot -> thread id
  std::vector<int> open_call;     // slot -> index of its pending call
  std::vector<int> pending;       // indices of pending calls, invocation order
  std::vector<std::vector<Value>> pending_values;
  std::vector<std::size_t> choice;  // completion odometer; 0 = drop
  std::vector<Value> domain;        // sorted unique push arguments
  std::vector<std::vector<int>> by_thread;  // slot -> active call indices
  std::vector<int> needed;  // call x slot: committed ops required before scheduling
  std::vector<int> pos;     // slot -> committed ops of that thread
  std::vector<int> path;    // depth -> chosen call index
  std::vector<SeqObjectSpec::State> state_stack;
  std::vector<std::vector<SeqObjectSpec::Outcome>> outcome_stack;
  std::vector<std::vector<std::pair<int, int>>> cand_stack;
  std::unordered_map<std::uint64_t, std::vector<SeqObjectSpec::State>> failed;
  // Dense-indexed variant of `failed` used when the per-thread position
  // space is small; epoch stamps make per-completion resets O(1).
  std::vector<std::vector<SeqObjectSpec::State>> flat_failed;
  std::vector<std::uint64_t> flat_epoch;
  std::uint64_t epoch = 0;
  std::vector<std::size_t> stride;
};

/// Decides the chosen condition by incremental extension of partial
/// witness sequences, memoizing refuted (committed-counts, spec-state)
/// pairs. Pending calls are completed via the history module's recipe,
/// removal tried before completion; the returned witness is the
/// lexicographically least by invocation index, making output
/// deterministic. Throws InvalidHistoryError on an invalid history.
Verdict check_history(const History& h, const SeqObjectSpec& spec, CheckMode mode);

/// Scratch-reusing variant for bulk checking. Skips validation: the
/// caller guarantees h is valid.
Verdict check_history(const History& h, const SeqObjectSpec& spec, CheckMode mode,
                      CheckerScratch& scratch);

Verdict is_sequentially_consistent(const History& h, const SeqObjectSpec& spec);
Verdict is_linearizable(const History& h, const SeqObjectSpec& spec);

/// Independent oracle: enumerates all completions and all per-thread-order
/// preserving permutations outright, filtering by the mode's order
/// constraints and by legality. Same verdict and witness contract as
/// check_history. Throws OracleBoundError beyond 10 operations.
Verdict brute_force_check(const History& h, const SeqObjectSpec& spec, CheckMode mode);

/// Reads a History JSON file, validates, and dispatches to check_history.
/// Throws HistoryParseError (unreadable file or malformed JSON) or
/// InvalidHistoryError.
Verdict check_file(const std::string& path, const SeqObjectSpec& spec, CheckMode mode);

/// {"holds":bool,"witness":[events]|null,"note":string}
std::string verdict_to_json(const Verdict& v);

}  // namespace linref

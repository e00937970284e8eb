#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "linref/value.hpp"

namespace linref {

enum class EventKind : std::uint8_t { Invocation, Response };

/// One invocation or response record. `payload` is the argument for
/// invocations (unit when the operation takes none) and the return value
/// for responses. `op_instance` pairs a response with its invocation; the
/// canonical assignment is the index of the invocation event in the full
/// history, and the id survives projections and completions unchanged.
struct Event {
  EventKind kind = EventKind::Invocation;
  int thread = 0;
  std::string op;
  Value payload;
  int op_instance = -1;

  friend auto operator<=>(const Event&, const Event&) = default;
};

Event invocation(int thread, std::string op, Value argument, int op_instance);
Event response(int thread, std::string op, Value result, int op_instance);

/// Finite record of a client's interactions with one object.
struct History {
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }

  friend auto operator<=>(const History&, const History&) = default;
};

/// One operation call as a derived view of a history: its invocation, and
/// its response if any. `result` is absent while the call is pending.
struct OpCall {
  int op_instance = -1;
  int thread = 0;
  std::string op;
  Value argument;
  std::optional<Value> result;
  int invocation_index = -1;
  std::optional<int> response_index;

  bool pending() const { return !result.has_value(); }
};

struct HistoryViolation {
  int event_index = 0;
  std::string message;
};

/// Checks the history invariants: per-thread alternation
/// inv,resp,inv,... starting with an invocation, responses matching their
/// pending invocation (same thread, same operation), and no reserved
/// value as a push argument. Returns the first violation, or nullopt.
std::optional<HistoryViolation> validate_history(const History& h);

/// All operation calls of a valid history, in invocation order.
std::vector<OpCall> op_calls(const History& h);

/// Subsequence of h containing exactly thread t's events. A thread absent
/// from h yields the empty history.
History thread_projection(const History& h, int thread);

struct NoSuchOperationError : std::invalid_argument {
  explicit NoSuchOperationError(int op_instance)
      : std::invalid_argument("no such operation: instance " + std::to_string(op_instance)) {}
};

/// True iff operation a's response occurs strictly before operation b's
/// invocation. Throws NoSuchOperationError for unknown instances.
bool real_time_precedes(const History& h, int a_instance, int b_instance);

/// The value domain a history's completions draw from: every push
/// argument occurring in h, plus empty and unit.
std::vector<Value> completion_domain(const History& h);

/// Candidate response values for completing a pending call of `op`:
/// pushes complete only with unit; pops with any pushed value or empty.
std::vector<Value> completion_values(const History& h, const std::string& op);

/// All completions of h: for each pending invocation independently,
/// either drop it or append a matching response drawn from the
/// completion values. Enumeration order puts removal before completion.
/// Every result is complete and valid; for complete h the result is {h}.
std::vector<History> completions(const History& h);

struct HistoryParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the History JSON format: an array of
/// {"kind":"inv"|"resp","thread":int,"op":"push"|"pop","value":int|"empty"|"unit"}.
/// Field order is irrelevant; unknown fields are rejected. Responses are
/// matched to invocations positionally per thread.
History parse_history_json(const std::string& text);

/// Serializes back to the same format (fields emitted as kind, thread,
/// op, value). parse(serialize(h)) reproduces h for valid complete or
/// pending histories.
std::string history_to_json(const History& h);

/// Compact one-line rendering for logs and CLI output.
std::string format_history(const History& h);

}  // namespace linref

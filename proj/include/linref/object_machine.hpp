#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linref/history.hpp"
#include "linref/value.hpp"

namespace linref {

struct PendingOperationError : std::logic_error {
  PendingOperationError() : std::logic_error("operation pending") {}
};

struct NoActiveOperationError : std::logic_error {
  NoActiveOperationError() : std::logic_error("no active operation") {}
};

class ObjectMachine;
using MachinePtr = std::shared_ptr<const ObjectMachine>;

/// Stepwise concurrent object. Machines are immutable values: invoke,
/// step and try_return return successor machines instead of mutating, so
/// explorers can branch freely and machines can be shared across threads.
///
/// Protocol per operation call: invoke installs a frame at the
/// operation's first label; step executes that thread's single next
/// atomic step (possibly several successors for machines with internal
/// nondeterminism); once the frame reaches its return step, try_return
/// yields the value and an idle-frame successor.
///
/// The machine records the history of its interactions. The fine-grained
/// Treiber stack emits the invocation event at invoke time and the
/// response at return time. The coarse machines (atomic wrapper, SC
/// oracle) execute an operation as one atomic transition and emit
/// invocation and response together at that step, which keeps their
/// emitted histories sequential by construction.
class ObjectMachine {
 public:
  virtual ~ObjectMachine() = default;

  virtual std::string_view name() const = 0;

  /// True iff thread t has no frame installed.
  virtual bool idle(int thread) const = 0;

  /// True iff thread t's frame has reached its return step.
  virtual bool at_return(int thread) const = 0;

  /// Starts an operation call. Throws PendingOperationError when the
  /// thread's frame is busy.
  virtual MachinePtr invoke(int thread, std::string_view op, const Value& arg) const = 0;

  /// Executes thread t's next atomic step; at the return step this
  /// performs the return transition (dropping the value — use try_return
  /// to observe it). Throws NoActiveOperationError on an idle frame.
  virtual std::vector<MachinePtr> step(int thread) const = 0;

  /// The return transition: response event, return value, frame goes
  /// idle. nullopt (NOT_READY) while the frame has not reached its
  /// return step. Throws NoActiveOperationError on an idle frame.
  virtual std::optional<std::pair<Value, MachinePtr>> try_return(int thread) const = 0;

  /// History emitted so far; always valid per the history module.
  virtual const History& emitted() const = 0;

  /// Whether a terminated execution ending in this machine counts. The
  /// SC oracle overrides this with its consistency filter.
  virtual bool retain_execution() const { return true; }

  /// Canonical serialization of everything that determines the machine's
  /// future behavior and retention — used to deduplicate explorer
  /// states. Internal identifiers (e.g. Treiber node ids) are renamed to
  /// visit order, so keys are identical across bisimilar machines.
  virtual std::string state_key() const = 0;
};

MachinePtr treiber_stack(int first_node_id = 1);

}  // namespace linref

#pragma once

#include "linref/object_machine.hpp"
#include "linref/seq_spec.hpp"

namespace linref {

/// Wraps a sequential specification as a concurrent object whose
/// operations take effect in a single atomic step. The effect step runs
/// the spec transition (one successor per outcome), appends the
/// invocation/response pair to the emitted history, and leaves the frame
/// at its return step. Calls outside the spec domain surface as
/// SpecDomainError at the effect step.
MachinePtr atomic_object(SeqObjectSpec spec);

/// The atomic stack: atomic_object(stack_spec()).
MachinePtr atomic_stack();

}  // namespace linref

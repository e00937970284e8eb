#pragma once

#include <vector>

#include "linref/object_machine.hpp"
#include "linref/seq_spec.hpp"

namespace linref {

/// Most general object that is sequentially consistent with respect to
/// spec: each operation takes effect in a single atomic step that
/// nondeterministically picks the return value — UNIT for push, any
/// element of domain otherwise — and logs the completed call. Whether a
/// finished execution counts is decided only at the end
/// (retain_execution): the call log must be sequentially consistent
/// w.r.t. spec. Generate-then-filter is what makes the object most
/// general; SC is not prefix-closed, so filtering any earlier would cut
/// executions whose prefixes look bad but whose completions are fine.
///
/// domain must contain EMPTY and every value clients may push.
MachinePtr sc_oracle(SeqObjectSpec spec, std::vector<Value> domain);

/// The SC stack oracle over the given push values:
/// sc_oracle(stack_spec(), values + {EMPTY}).
MachinePtr sc_stack(std::vector<Value> push_values);

}  // namespace linref

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "linref/atomic_object.hpp"
#include "linref/checkers.hpp"
#include "linref/client_lang.hpp"
#include "linref/explorer.hpp"
#include "linref/sc_oracle.hpp"

using namespace linref;
using linref::testing::iv;

namespace {

Valuation val(std::initializer_list<Value> vs) { return Valuation(vs); }

bool has_trace(const TraceSet& ts, const ObservableTrace& t) {
  return std::find(ts.traces.begin(), ts.traces.end(), t) != ts.traces.end();
}

bool subset(const std::vector<ObservableTrace>& a, const std::vector<ObservableTrace>& b) {
  for (const ObservableTrace& t : a)
    if (std::find(b.begin(), b.end(), t) == b.end()) return false;
  return true;
}

// The counterexample valuation sequence over (x, y, z) that separates the
// SC stack from the atomic stack under program_sc2.
ObservableTrace sc2_witness_trace() {
  return {val({iv(0), iv(0), iv(0)}), val({iv(1), iv(0), iv(0)}),
          val({iv(1), iv(0), iv(1)}), val({iv(1), iv(2), iv(1)})};
}

}  // namespace

TEST_CASE("two assign-only threads interleave completely") {
  ClientProgram p = parse_program(
      "init x=0, y=0;\n"
      "thread 1 { x := 1; x := 2; }\n"
      "thread 2 { y := 1; y := 2; }\n");
  TraceSet ts = explore(p, atomic_stack());
  CHECK(ts.stats.executions == 6);  // binomial(4,2) schedules
  CHECK(ts.traces.size() == 6);     // every schedule shows a distinct trace
  CHECK(ts.finals == std::vector<Valuation>{val({iv(2), iv(2)})});
  CHECK(ts.stats.max_depth == 4);
  CHECK(has_trace(ts, {val({iv(0), iv(0)}), val({iv(1), iv(0)}), val({iv(1), iv(1)}),
                       val({iv(1), iv(2)}), val({iv(2), iv(2)})}));
}

TEST_CASE("single thread against the atomic stack is deterministic") {
  ClientProgram p = parse_program("init x=9;\nthread 1 { s.push(1); x := s.pop(); }\n");
  TraceSet ts = explore(p, atomic_stack());
  REQUIRE(ts.traces.size() == 1);
  CHECK(ts.traces[0] == ObservableTrace{val({iv(9)}), val({iv(1)})});
  ClientProgram q = parse_program("init x=9;\nthread 1 { x := s.pop(); }\n");
  CHECK(final_states(q, atomic_stack()) ==
        std::vector<Valuation>{val({Value::empty()})});
}

TEST_CASE("empty program explores one state") {
  TraceSet ts = explore(parse_program("init x=0;\n"), atomic_stack());
  CHECK(ts.stats.states == 1);
  CHECK(ts.stats.executions == 1);
  CHECK(ts.traces == std::vector<ObservableTrace>{{val({iv(0)})}});
  CHECK(ts.stats.max_depth == 0);
}

TEST_CASE("sc2 with the atomic stack cannot show the reordered trace") {
  TraceSet ts = explore(program_sc2(), atomic_stack());
  CHECK(ts.variables == std::vector<std::string>{"x", "y", "z"});
  CHECK_FALSE(has_trace(ts, sc2_witness_trace()));
  // Final states still include the witness's endpoint.
  CHECK(std::find(ts.finals.begin(), ts.finals.end(), val({iv(1), iv(2), iv(1)})) !=
        ts.finals.end());
  CHECK(ts.stats.states < ExploreOptions{}.state_budget);
}

TEST_CASE("sc2 with the sc oracle shows the reordered trace") {
  TraceSet ts = explore(program_sc2(), sc_stack(push_literals(program_sc2())));
  CHECK(has_trace(ts, sc2_witness_trace()));
}

TEST_CASE("oracle filtering discards non-SC executions") {
  // One lone pop: the oracle may commit any value, but only EMPTY
  // survives the filter.
  ClientProgram p = parse_program("init x=0;\nthread 1 { x := s.pop(); }\n");
  TraceSet ts = explore(p, sc_stack({iv(1), iv(2)}));
  CHECK(ts.finals == std::vector<Valuation>{val({Value::empty()})});
  CHECK(ts.stats.executions == 1);
}

TEST_CASE("atomic traces are a subset of oracle traces") {
  for (const ClientProgram& p : {program_example1(), program_sc2()}) {
    TraceSet a = explore(p, atomic_stack());
    TraceSet s = explore(p, sc_stack(push_literals(p)));
    CHECK(subset(a.traces, s.traces));
  }
  // For sc2 the inclusion is strict: the oracle shows the reordered trace.
  TraceSet a = explore(program_sc2(), atomic_stack());
  TraceSet s = explore(program_sc2(), sc_stack(push_literals(program_sc2())));
  CHECK_FALSE(subset(s.traces, a.traces));
}

TEST_CASE("budget exhaustion reports states visited") {
  ExploreOptions opts;
  opts.state_budget = 10;
  try {
    explore(program_sc2(), treiber_stack(), opts);
    FAIL_CHECK("expected BudgetExceededError");
  } catch (const BudgetExceededError& e) {
    CHECK(e.states == 11);
    CHECK(std::string(e.what()) == "budget exceeded: 11 states visited");
  }
}

TEST_CASE("trace sets are independent of scheduling order") {
  ExploreOptions rev;
  rev.reverse_successor_order = true;
  for (const ClientProgram& p : {program_example1(), program_sc2()}) {
    for (const MachinePtr& m :
         {atomic_stack(), treiber_stack(), sc_stack(push_literals(p))}) {
      TraceSet a = explore(p, m);
      TraceSet b = explore(p, m, rev);
      CHECK(a.traces == b.traces);
      CHECK(a.finals == b.finals);
      CHECK(a.stats.states == b.stats.states);
      CHECK(a.stats.executions == b.stats.executions);
    }
  }
}

TEST_CASE("renaming treiber node ids leaves the trace set unchanged") {
  TraceSet a = explore(program_sc2(), treiber_stack(1));
  TraceSet b = explore(program_sc2(), treiber_stack(4096));
  CHECK(a.traces == b.traces);
  CHECK(a.stats.states == b.stats.states);
}

TEST_CASE("collected histories are valid, complete and legal per machine") {
  ExploreOptions opts;
  opts.collect_histories = true;
  TraceSet at = explore(program_example1(), atomic_stack(), opts);
  CHECK(!at.histories.empty());
  for (const History& h : at.histories) {
    CHECK(validate_history(h) == std::nullopt);
    for (const OpCall& c : op_calls(h)) CHECK_FALSE(c.pending());
    CHECK(legal(stack_spec(), h));  // the atomic machine emits sequential histories
  }
  ClientProgram p = parse_program("init x=0;\nthread 1 { s.push(1); }\nthread 2 { x := s.pop(); }\n");
  TraceSet tr = explore(p, treiber_stack(), opts);
  CHECK(tr.histories.size() > 1);  // overlapping and sequential variants
  for (const History& h : tr.histories) {
    CHECK(validate_history(h) == std::nullopt);
    CHECK(is_linearizable(h, stack_spec()).holds);
  }
}

TEST_CASE("count_states and final_states agree with explore") {
  ExploreStats st = count_states(program_sc2(), atomic_stack());
  TraceSet ts = explore(program_sc2(), atomic_stack());
  CHECK(st.states == ts.stats.states);
  CHECK(st.traces == ts.traces.size());
  CHECK(final_states(program_sc2(), atomic_stack()) == ts.finals);
}

TEST_CASE("stutter reduction collapses runs and is idempotent") {
  ObservableTrace t{val({iv(0)}), val({iv(0)}), val({iv(1)}), val({iv(1)}), val({iv(0)})};
  ObservableTrace r = stutter_reduce(t);
  CHECK(r == ObservableTrace{val({iv(0)}), val({iv(1)}), val({iv(0)})});
  CHECK(stutter_reduce(r) == r);
  CHECK(stutter_reduce({}).empty());
  for (const ObservableTrace& tr : explore(program_sc2(), atomic_stack()).traces)
    CHECK(stutter_reduce(tr) == tr);
}

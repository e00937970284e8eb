#include <doctest.h>

#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "linref/seq_spec.hpp"

using namespace linref;
using linref::testing::Hist;
using linref::testing::iv;

TEST_CASE("stack_spec pop on the empty stack returns empty and keeps the state") {
  auto spec = stack_spec();
  auto outs = spec.step({}, "pop", Value::unit());
  REQUIRE(outs.size() == 1);
  CHECK(outs[0].ret == Value::empty());
  CHECK(outs[0].next.empty());
}

TEST_CASE("stack_spec push prepends") {
  auto spec = stack_spec();
  auto s1 = spec.step({}, "push", iv(1));
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].ret == Value::unit());
  auto s2 = spec.step(s1[0].next, "push", iv(2));
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].next == SeqObjectSpec::State{iv(2), iv(1)});
}

TEST_CASE("stack_spec pop returns the head") {
  auto spec = stack_spec();
  auto outs = spec.step({iv(2), iv(1)}, "pop", Value::unit());
  REQUIRE(outs.size() == 1);
  CHECK(outs[0].ret == iv(2));
  CHECK(outs[0].next == SeqObjectSpec::State{iv(1)});
}

TEST_CASE("stack_spec rejects reserved values and unknown operations") {
  auto spec = stack_spec();
  CHECK_THROWS_AS((void)spec.step({}, "push", Value::empty()), SpecDomainError);
  CHECK_THROWS_AS((void)spec.step({}, "push", Value::unit()), SpecDomainError);
  CHECK_THROWS_AS((void)spec.step({}, "peek", Value::unit()), SpecDomainError);
  CHECK_THROWS_WITH((void)spec.step({}, "push", Value::empty()), "reserved value");
}

TEST_CASE("legal accepts simple stack histories") {
  auto spec = stack_spec();
  History h = Hist{}
                  .inv(1, "push", iv(1))
                  .resp(1, "push", Value::unit())
                  .inv(1, "pop")
                  .resp(1, "pop", iv(1));
  CHECK(legal(spec, h));
}

TEST_CASE("legal rejects a pop from nowhere") {
  auto spec = stack_spec();
  History h = Hist{}.inv(1, "pop").resp(1, "pop", iv(1));
  CHECK_FALSE(legal(spec, h));
}

TEST_CASE("legal accepts the out-of-order pop pair") {
  // push(1) push(2) then the pops observe 2 first: fine sequentially.
  auto spec = stack_spec();
  History h = Hist{}
                  .inv(1, "push", iv(1))
                  .resp(1, "push", Value::unit())
                  .inv(1, "push", iv(2))
                  .resp(1, "push", Value::unit())
                  .inv(2, "pop")
                  .resp(2, "pop", iv(2))
                  .inv(1, "pop")
                  .resp(1, "pop", iv(1));
  CHECK(legal(spec, h));
}

TEST_CASE("legal requires sequential input") {
  auto spec = stack_spec();
  History odd = Hist{}.inv(1, "push", iv(1));
  CHECK_THROWS_AS((void)legal(spec, odd), NotSequentialError);

  History interleaved = Hist{}
                            .inv(1, "push", iv(1))
                            .inv(2, "pop")
                            .resp(1, "push", Value::unit())
                            .resp(2, "pop", iv(1));
  CHECK_THROWS_AS((void)legal(spec, interleaved), NotSequentialError);
}

TEST_CASE("run_spec replays deterministic calls") {
  auto spec = stack_spec();
  CHECK(run_spec(spec, {}) == std::vector<Replay>{Replay{}});

  auto one = run_spec(spec, {{"push", iv(1)}});
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].size() == 1);
  CHECK(one[0][0].first == Value::unit());
  CHECK(one[0][0].second == SeqObjectSpec::State{iv(1)});

  auto three = run_spec(spec, {{"push", iv(1)}, {"push", iv(2)}, {"pop", Value::unit()}});
  REQUIRE(three.size() == 1);
  CHECK(three[0].back().first == iv(2));
  CHECK(three[0].back().second == SeqObjectSpec::State{iv(1)});

  CHECK_THROWS_AS((void)run_spec(spec, {{"push", Value::empty()}}), SpecDomainError);
}

namespace {

// Independent oracle: a direct stack simulator over int64 with the top at
// the BACK (the spec keeps it at the front), sharing no code with legal().
// Call kinds: 0 push(1), 1 push(2), 2 pop->1, 3 pop->2, 4 pop->empty.
bool simulator_accepts(const std::vector<int>& kinds) {
  std::vector<std::int64_t> stack;
  for (int k : kinds) {
    switch (k) {
      case 0: stack.push_back(1); break;
      case 1: stack.push_back(2); break;
      case 2:
      case 3: {
        if (stack.empty() || stack.back() != (k == 2 ? 1 : 2)) return false;
        stack.pop_back();
        break;
      }
      default:
        if (!stack.empty()) return false;
        break;
    }
  }
  return true;
}

History history_of_kinds(const std::vector<int>& kinds) {
  Hist b;
  for (int k : kinds) {
    switch (k) {
      case 0: b.inv(1, "push", iv(1)).resp(1, "push", Value::unit()); break;
      case 1: b.inv(1, "push", iv(2)).resp(1, "push", Value::unit()); break;
      case 2: b.inv(1, "pop").resp(1, "pop", iv(1)); break;
      case 3: b.inv(1, "pop").resp(1, "pop", iv(2)); break;
      default: b.inv(1, "pop").resp(1, "pop", Value::empty()); break;
    }
  }
  return b;
}

}  // namespace

TEST_CASE("legal agrees with a direct stack simulator on all histories of up to 8 calls") {
  auto spec = stack_spec();
  long checked = 0;
  for (int len = 0; len <= 8; ++len) {
    std::vector<int> kinds(len, 0);
    for (;;) {
      CHECK(legal(spec, history_of_kinds(kinds)) == simulator_accepts(kinds));
      ++checked;
      int i = len - 1;
      while (i >= 0 && kinds[i] == 4) kinds[i--] = 0;
      if (i < 0) break;
      ++kinds[i];
    }
  }
  CHECK(checked == 488281);  // sum of 5^len for len 0..8
}

TEST_CASE("reachable stack states never contain reserved values") {
  auto spec = stack_spec();
  auto replays = run_spec(spec, {{"push", iv(1)}, {"push", iv(2)}, {"pop", Value::unit()},
                                 {"pop", Value::unit()}, {"pop", Value::unit()}});
  REQUIRE(replays.size() == 1);
  for (const auto& [ret, state] : replays[0]) {
    for (const Value& v : state) CHECK(v.is_int());
  }
}

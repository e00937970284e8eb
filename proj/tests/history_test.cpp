#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "linref/history.hpp"

using namespace linref;
using linref::testing::Hist;
using linref::testing::iv;

TEST_CASE("validate_history accepts the empty history") {
  CHECK_FALSE(validate_history(History{}).has_value());
}

TEST_CASE("validate_history accepts a complete call") {
  History h = Hist{}.inv(1, "push", iv(1)).resp(1, "push", Value::unit());
  CHECK_FALSE(validate_history(h).has_value());
}

TEST_CASE("validate_history flags a response without invocation") {
  History h;
  h.events.push_back(response(1, "push", Value::unit(), 0));
  auto v = validate_history(h);
  REQUIRE(v.has_value());
  CHECK(v->event_index == 0);
}

TEST_CASE("validate_history flags a second invocation while pending") {
  History h = Hist{}.inv(1, "push", iv(1)).inv(1, "push", iv(2));
  auto v = validate_history(h);
  REQUIRE(v.has_value());
  CHECK(v->event_index == 1);
}

TEST_CASE("validate_history flags a mismatched response") {
  History h;
  h.events.push_back(invocation(1, "push", iv(1), 0));
  h.events.push_back(response(1, "pop", iv(1), 0));
  auto v = validate_history(h);
  REQUIRE(v.has_value());
  CHECK(v->event_index == 1);
}

TEST_CASE("validate_history rejects reserved values as push arguments") {
  History h = Hist{}.inv(1, "push", Value::empty());
  auto v = validate_history(h);
  REQUIRE(v.has_value());
  CHECK(v->event_index == 0);
  CHECK(v->message == "reserved value as push argument");
}

TEST_CASE("op_calls pairs invocations with responses and keeps pending calls") {
  History h = Hist{}
                  .inv(1, "push", iv(1))
                  .inv(2, "pop")
                  .resp(1, "push", Value::unit())
                  .inv(1, "pop");
  auto calls = op_calls(h);
  REQUIRE(calls.size() == 3);
  CHECK(calls[0].thread == 1);
  CHECK(calls[0].op == "push");
  CHECK(calls[0].result == Value::unit());
  CHECK(calls[0].invocation_index == 0);
  CHECK(calls[0].response_index == 2);
  CHECK(calls[1].pending());
  CHECK(calls[2].pending());
  CHECK(calls[2].invocation_index == 3);
}

TEST_CASE("thread_projection extracts one thread and partitions events") {
  History h = Hist{}
                  .inv(1, "push", iv(1))
                  .inv(2, "pop")
                  .resp(1, "push", Value::unit())
                  .resp(2, "pop", iv(1));
  History p1 = thread_projection(h, 1);
  History p2 = thread_projection(h, 2);
  REQUIRE(p1.events.size() == 2);
  CHECK(p1.events[0].op == "push");
  CHECK(p1.events[1].kind == EventKind::Response);
  REQUIRE(p2.events.size() == 2);
  CHECK(thread_projection(h, 7).empty());
  CHECK(p1.events.size() + p2.events.size() == h.events.size());
  CHECK(thread_projection(p1, 1) == p1);
}

TEST_CASE("real_time_precedes follows response-before-invocation order") {
  // Two calls by one thread in program order precede each other.
  History seq = Hist{}
                    .inv(1, "push", iv(1))
                    .resp(1, "push", Value::unit())
                    .inv(1, "pop")
                    .resp(1, "pop", iv(1));
  CHECK(real_time_precedes(seq, 0, 2));
  CHECK_FALSE(real_time_precedes(seq, 2, 0));

  // Overlapping calls precede in neither direction.
  History overlap = Hist{}
                        .inv(1, "push", iv(1))
                        .inv(2, "pop")
                        .resp(1, "push", Value::unit())
                        .resp(2, "pop", iv(1));
  CHECK_FALSE(real_time_precedes(overlap, 0, 1));
  CHECK_FALSE(real_time_precedes(overlap, 1, 0));

  CHECK_THROWS_AS((void)real_time_precedes(seq, 0, 99), NoSuchOperationError);
}

TEST_CASE("completion_domain collects push arguments plus reserved values") {
  History h = Hist{}
                  .inv(1, "push", iv(2))
                  .resp(1, "push", Value::unit())
                  .inv(1, "push", iv(1))
                  .resp(1, "push", Value::unit())
                  .inv(2, "push", iv(2));
  auto domain = completion_domain(h);
  REQUIRE(domain.size() == 4);
  CHECK(domain[0] == iv(1));
  CHECK(domain[1] == iv(2));
  CHECK(domain[2] == Value::empty());
  CHECK(domain[3] == Value::unit());
}

TEST_CASE("completions of a complete history is the singleton") {
  History h = Hist{}.inv(1, "push", iv(1)).resp(1, "push", Value::unit());
  auto cs = completions(h);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == h);
}

TEST_CASE("completions of a lone pending push drops or completes with unit") {
  History h = Hist{}.inv(1, "push", iv(1));
  auto cs = completions(h);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].empty());  // removal enumerated first
  REQUIRE(cs[1].events.size() == 2);
  CHECK(cs[1].events[1].payload == Value::unit());
}

TEST_CASE("completions of a pending pop draw from the pushed values and empty") {
  History h = Hist{}
                  .inv(2, "push", iv(1))
                  .resp(2, "push", Value::unit())
                  .inv(1, "pop");
  auto cs = completions(h);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].events.size() == 2);  // dropped
  CHECK(cs[1].events.back().payload == iv(1));
  CHECK(cs[2].events.back().payload == Value::empty());
  for (const History& c : cs) {
    CHECK_FALSE(validate_history(c).has_value());
    for (const OpCall& call : op_calls(c)) CHECK_FALSE(call.pending());
  }
}

TEST_CASE("completions handle several pending calls independently") {
  History h = Hist{}.inv(1, "push", iv(1)).inv(2, "pop");
  auto cs = completions(h);
  // push: drop | unit; pop: drop | 1 | empty.
  REQUIRE(cs.size() == 6);
  std::set<History> distinct(cs.begin(), cs.end());
  CHECK(distinct.size() == 6);
  for (const History& c : cs) {
    CHECK_FALSE(validate_history(c).has_value());
    for (const OpCall& call : op_calls(c)) CHECK_FALSE(call.pending());
  }
}

TEST_CASE("history JSON round-trips") {
  History h = Hist{}
                  .inv(1, "push", iv(1))
                  .inv(2, "pop")
                  .resp(1, "push", Value::unit())
                  .resp(2, "pop", Value::empty())
                  .inv(1, "pop");
  History back = parse_history_json(history_to_json(h));
  CHECK(back == h);
}

TEST_CASE("history JSON parser rejects malformed input") {
  CHECK_THROWS_AS((void)parse_history_json("{"), HistoryParseError);
  CHECK_THROWS_AS((void)parse_history_json("{}"), HistoryParseError);
  // unknown field
  CHECK_THROWS_AS(
      (void)parse_history_json(
          R"([{"kind":"inv","thread":1,"op":"push","value":1,"extra":0}])"),
      HistoryParseError);
  // missing field
  CHECK_THROWS_AS((void)parse_history_json(R"([{"kind":"inv","thread":1,"op":"push"}])"),
                  HistoryParseError);
  // bad kind / op / thread / value
  CHECK_THROWS_AS(
      (void)parse_history_json(R"([{"kind":"invoke","thread":1,"op":"push","value":1}])"),
      HistoryParseError);
  CHECK_THROWS_AS(
      (void)parse_history_json(R"([{"kind":"inv","thread":1,"op":"peek","value":1}])"),
      HistoryParseError);
  CHECK_THROWS_AS(
      (void)parse_history_json(R"([{"kind":"inv","thread":"one","op":"push","value":1}])"),
      HistoryParseError);
  CHECK_THROWS_AS(
      (void)parse_history_json(R"([{"kind":"inv","thread":1,"op":"push","value":"none"}])"),
      HistoryParseError);
  // pop invocations carry the unit placeholder, nothing else
  CHECK_THROWS_AS(
      (void)parse_history_json(R"([{"kind":"inv","thread":1,"op":"pop","value":1}])"),
      HistoryParseError);
}

TEST_CASE("history JSON parser accepts field order variations") {
  History a = parse_history_json(R"([{"kind":"inv","thread":1,"op":"push","value":2}])");
  History b = parse_history_json(R"([{"value":2,"op":"push","thread":1,"kind":"inv"}])");
  CHECK(a == b);
  REQUIRE(a.events.size() == 1);
  CHECK(a.events[0].payload == iv(2));
}

TEST_CASE("format_history renders one event per token") {
  History h = Hist{}.inv(1, "push", iv(1)).resp(1, "push", Value::unit());
  CHECK(format_history(h) == "inv(t1,push,1) resp(t1,push,unit)");
}

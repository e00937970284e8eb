#include "linref/json_io.hpp"

namespace linref {

using json = nlohmann::ordered_json;

json json_of(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Empty: return json("empty");
    case Value::Kind::Unit: return json("unit");
    default: return json(v.as_int());
  }
}

Value value_of_json(const json& j) {
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "empty") return Value::empty();
    if (s == "unit") return Value::unit();
  }
  throw HistoryParseError("bad \"value\": expected an integer, \"empty\" or \"unit\", got " +
                          j.dump());
}

json json_of(const History& h) {
  json arr = json::array();
  for (const Event& e : h.events) {
    json ev;
    ev["kind"] = e.kind == EventKind::Invocation ? "inv" : "resp";
    ev["thread"] = e.thread;
    ev["op"] = e.op;
    ev["value"] = json_of(e.payload);
    arr.push_back(std::move(ev));
  }
  return arr;
}

}  // namespace linref

#include "linref/history.hpp"

#include <algorithm>
#include <map>

#include "linref/json_io.hpp"

namespace linref {

Event invocation(int thread, std::string op, Value argument, int op_instance) {
  return Event{EventKind::Invocation, thread, std::move(op), argument, op_instance};
}

Event response(int thread, std::string op, Value result, int op_instance) {
  return Event{EventKind::Response, thread, std::move(op), result, op_instance};
}

std::optional<HistoryViolation> validate_history(const History& h) {
  // (thread, index of its pending invocation) pairs; flat because
  // histories involve a handful of threads.
  std::vector<std::pair<int, int>> pending;
  for (int i = 0; i < static_cast<int>(h.events.size()); ++i) {
    const Event& e = h.events[i];
    auto it = std::find_if(pending.begin(), pending.end(),
                           [&](const auto& p) { return p.first == e.thread; });
    if (e.kind == EventKind::Invocation) {
      if (it != pending.end()) {
        return HistoryViolation{i, "thread " + std::to_string(e.thread) +
                                       " invokes while an operation is pending"};
      }
      if (e.op == "push" && !e.payload.is_int()) {
        return HistoryViolation{i, "reserved value as push argument"};
      }
      pending.emplace_back(e.thread, i);
    } else {
      if (it == pending.end()) {
        return HistoryViolation{i, "response without a pending invocation on thread " +
                                       std::to_string(e.thread)};
      }
      const Event& inv = h.events[it->second];
      if (inv.op != e.op || inv.op_instance != e.op_instance) {
        return HistoryViolation{i, "response does not match the pending invocation"};
      }
      pending.erase(it);
    }
  }
  return std::nullopt;
}

std::vector<OpCall> op_calls(const History& h) {
  std::vector<OpCall> calls;
  for (int i = 0; i < static_cast<int>(h.events.size()); ++i) {
    const Event& e = h.events[i];
    if (e.kind == EventKind::Invocation) {
      OpCall c;
      c.op_instance = e.op_instance;
      c.thread = e.thread;
      c.op = e.op;
      c.argument = e.payload;
      c.invocation_index = i;
      calls.push_back(std::move(c));
    } else {
      for (auto it = calls.rbegin(); it != calls.rend(); ++it) {
        if (it->op_instance == e.op_instance && it->thread == e.thread) {
          it->result = e.payload;
          it->response_index = i;
          break;
        }
      }
    }
  }
  return calls;
}

History thread_projection(const History& h, int thread) {
  History out;
  for (const Event& e : h.events) {
    if (e.thread == thread) out.events.push_back(e);
  }
  return out;
}

bool real_time_precedes(const History& h, int a_instance, int b_instance) {
  std::optional<int> a_resp;
  std::optional<int> b_inv;
  bool seen_a = false, seen_b = false;
  for (int i = 0; i < static_cast<int>(h.events.size()); ++i) {
    const Event& e = h.events[i];
    if (e.op_instance == a_instance) {
      seen_a = true;
      if (e.kind == EventKind::Response) a_resp = i;
    }
    if (e.op_instance == b_instance) {
      seen_b = true;
      if (e.kind == EventKind::Invocation) b_inv = i;
    }
  }
  if (!seen_a) throw NoSuchOperationError(a_instance);
  if (!seen_b) throw NoSuchOperationError(b_instance);
  return a_resp.has_value() && b_inv.has_value() && *a_resp < *b_inv;
}

std::vector<Value> completion_domain(const History& h) {
  std::vector<Value> domain;
  for (const Event& e : h.events) {
    if (e.kind == EventKind::Invocation && e.op == "push" && e.payload.is_int()) {
      domain.push_back(e.payload);
    }
  }
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  domain.push_back(Value::empty());
  domain.push_back(Value::unit());
  return domain;
}

std::vector<Value> completion_values(const History& h, const std::string& op) {
  if (op == "push") return {Value::unit()};
  std::vector<Value> values = completion_domain(h);
  if (op == "pop") {
    std::erase(values, Value::unit());
  }
  return values;
}

std::vector<History> completions(const History& h) {
  std::vector<OpCall> pending;
  for (OpCall& c : op_calls(h)) {
    if (c.pending()) pending.push_back(std::move(c));
  }
  if (pending.empty()) return {h};

  // Per pending call: drop it, or append a response with each candidate
  // value. Choice index 0 means drop, i > 0 means the (i-1)-th value.
  std::vector<std::vector<Value>> candidates;
  candidates.reserve(pending.size());
  for (const OpCall& c : pending) candidates.push_back(completion_values(h, c.op));

  std::vector<History> out;
  std::vector<std::size_t> choice(pending.size(), 0);
  for (;;) {
    History result;
    for (const Event& e : h.events) {
      bool dropped = false;
      for (std::size_t k = 0; k < pending.size(); ++k) {
        if (choice[k] == 0 && e.op_instance == pending[k].op_instance &&
            e.kind == EventKind::Invocation) {
          dropped = true;
          break;
        }
      }
      if (!dropped) result.events.push_back(e);
    }
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (choice[k] > 0) {
        result.events.push_back(response(pending[k].thread, pending[k].op,
                                         candidates[k][choice[k] - 1],
                                         pending[k].op_instance));
      }
    }
    out.push_back(std::move(result));

    std::size_t k = pending.size();
    while (k > 0) {
      --k;
      if (++choice[k] <= candidates[k].size()) break;
      choice[k] = 0;
      if (k == 0) return out;
    }
  }
}

using json = nlohmann::ordered_json;

History parse_history_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw HistoryParseError(std::string("history JSON: ") + e.what());
  }
  if (!doc.is_array()) throw HistoryParseError("history JSON: expected a top-level array");

  History h;
  std::map<int, int> pending;  // thread -> op_instance of pending invocation
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& ev = doc[i];
    const std::string where = "event " + std::to_string(i);
    if (!ev.is_object()) throw HistoryParseError(where + ": expected an object");
    for (const auto& [key, value] : ev.items()) {
      (void)value;
      if (key != "kind" && key != "thread" && key != "op" && key != "value") {
        throw HistoryParseError(where + ": unknown field \"" + key + "\"");
      }
    }
    for (const char* field : {"kind", "thread", "op", "value"}) {
      if (!ev.contains(field)) {
        throw HistoryParseError(where + ": missing field \"" + std::string(field) + "\"");
      }
    }
    if (!ev["kind"].is_string() || (ev["kind"] != "inv" && ev["kind"] != "resp")) {
      throw HistoryParseError(where + ": bad \"kind\": expected \"inv\" or \"resp\"");
    }
    if (!ev["thread"].is_number_integer()) {
      throw HistoryParseError(where + ": bad \"thread\": expected an integer");
    }
    if (!ev["op"].is_string() || (ev["op"] != "push" && ev["op"] != "pop")) {
      throw HistoryParseError(where + ": bad \"op\": expected \"push\" or \"pop\"");
    }

    Event e;
    e.kind = ev["kind"] == "inv" ? EventKind::Invocation : EventKind::Response;
    e.thread = ev["thread"].get<int>();
    e.op = ev["op"].get<std::string>();
    Value v;
    try {
      v = value_of_json(ev["value"]);
    } catch (const HistoryParseError& err) {
      throw HistoryParseError(where + ": " + err.what());
    }
    if (e.kind == EventKind::Invocation && e.op == "pop" && !v.is_unit()) {
      throw HistoryParseError(where + ": pop takes no argument; expected \"value\":\"unit\"");
    }
    e.payload = v;

    // Positional matching per thread; a response with no matching pending
    // invocation keeps instance -1 and is reported by validate_history.
    if (e.kind == EventKind::Invocation) {
      e.op_instance = static_cast<int>(i);
      auto [it, inserted] = pending.emplace(e.thread, e.op_instance);
      if (!inserted) it->second = e.op_instance;  // validate_history flags this
    } else {
      auto it = pending.find(e.thread);
      if (it != pending.end()) {
        const Event& inv = h.events[it->second];
        if (inv.op == e.op) e.op_instance = inv.op_instance;
        pending.erase(it);
      }
    }
    h.events.push_back(std::move(e));
  }
  return h;
}

std::string history_to_json(const History& h) { return json_of(h).dump(); }

std::string format_history(const History& h) {
  std::string out;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (i) out += " ";
    out += e.kind == EventKind::Invocation ? "inv(" : "resp(";
    out += "t" + std::to_string(e.thread) + "," + e.op + "," + e.payload.to_string() + ")";
  }
  return out;
}

}  // namespace linref

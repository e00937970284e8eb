#pragma once

#include <map>
#include <string>
#include <utility>

#include "linref/history.hpp"

namespace linref::testing {

/// Fluent history builder with canonical op_instance assignment (the
/// invocation's event index) and positional response matching.
struct Hist {
  History h;
  std::map<int, int> open;

  Hist& inv(int thread, std::string op, Value arg = Value::unit()) {
    const int instance = static_cast<int>(h.events.size());
    open[thread] = instance;
    h.events.push_back(invocation(thread, std::move(op), arg, instance));
    return *this;
  }

  Hist& resp(int thread, std::string op, Value ret) {
    h.events.push_back(response(thread, std::move(op), ret, open[thread]));
    return *this;
  }

  operator History() const { return h; }
};

inline Value iv(std::int64_t n) { return Value::integer(n); }

}  // namespace linref::testing

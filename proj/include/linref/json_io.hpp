#pragma once

#include <json.hpp>

#include "linref/history.hpp"
#include "linref/value.hpp"

namespace linref {

nlohmann::ordered_json json_of(const Value& v);
Value value_of_json(const nlohmann::ordered_json& j);  // throws HistoryParseError
nlohmann::ordered_json json_of(const History& h);

}  // namespace linref

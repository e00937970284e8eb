#include "linref/refinement.hpp"

#include <algorithm>

#include "linref/json_io.hpp"

namespace linref {
namespace {

bool trace_less(const ObservableTrace& a, const ObservableTrace& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

// First element of `concrete` missing from sorted `abstract`, if any.
template <typename T, typename Less>
std::optional<T> first_missing(const std::vector<T>& concrete, const std::vector<T>& abstract,
                               Less less) {
  for (const T& t : concrete)
    if (!std::binary_search(abstract.begin(), abstract.end(), t, less)) return t;
  return std::nullopt;
}

}  // namespace

RefinementVerdict contextual_refines(const ClientProgram& p, const MachinePtr& abstract_o,
                                     const MachinePtr& concrete_o, const ExploreOptions& opts) {
  TraceSet abs = explore(p, abstract_o, opts);
  TraceSet con = explore(p, concrete_o, opts);
  RefinementVerdict v;
  v.mode = RefinementMode::Trace;
  v.counterexample = first_missing(con.traces, abs.traces, trace_less);
  v.holds = !v.counterexample.has_value();
  return v;
}

RefinementVerdict observational_refines(const ClientProgram& p, const MachinePtr& abstract_o,
                                        const MachinePtr& concrete_o,
                                        const ExploreOptions& opts) {
  std::vector<Valuation> abs = final_states(p, abstract_o, opts);
  std::vector<Valuation> con = final_states(p, concrete_o, opts);
  RefinementVerdict v;
  v.mode = RefinementMode::FinalState;
  auto missing = first_missing(con, abs, std::less<Valuation>());
  if (missing) v.counterexample = ObservableTrace{*missing};
  v.holds = !v.counterexample.has_value();
  return v;
}

std::string trace_to_string(const ObservableTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " -> ";
    out += "(";
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      if (j) out += ",";
      out += t[i][j].to_string();
    }
    out += ")";
  }
  return out;
}

std::string quantified_note(
    const std::vector<std::pair<std::string, RefinementVerdict>>& results) {
  std::size_t width = 7;  // fits the header
  for (const auto& [name, v] : results) width = std::max(width, name.size());
  auto pad = [width](std::string s) {
    s.resize(width, ' ');
    return s;
  };
  std::string out = pad("program") + "  mode   holds  counterexample\n";
  for (const auto& [name, v] : results) {
    out += pad(name);
    out += v.mode == RefinementMode::Trace ? "  trace  " : "  final  ";
    out += v.holds ? "yes    -" : "no     " + trace_to_string(*v.counterexample);
    out += "\n";
  }
  return out;
}

std::string verdict_to_json(const RefinementVerdict& v) {
  nlohmann::ordered_json j;
  j["holds"] = v.holds;
  j["mode"] = v.mode == RefinementMode::Trace ? "trace" : "final";
  if (v.counterexample) {
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const Valuation& val : *v.counterexample) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const Value& x : val) row.push_back(json_of(x));
      trace.push_back(std::move(row));
    }
    j["counterexample"] = std::move(trace);
  } else {
    j["counterexample"] = nullptr;
  }
  return j.dump();
}

}  // namespace linref

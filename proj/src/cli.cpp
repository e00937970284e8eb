#include "linref/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "linref/atomic_object.hpp"
#include "linref/checkers.hpp"
#include "linref/client_lang.hpp"
#include "linref/explorer.hpp"
#include "linref/json_io.hpp"
#include "linref/refinement.hpp"
#include "linref/sc_oracle.hpp"

namespace linref {
namespace {

ClientProgram load_program(const std::string& name) {
  if (name == "example1") return program_example1();
  if (name == "sc2") return program_sc2();
  std::ifstream in(name);
  if (!in) throw std::runtime_error("cannot open " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str());
}

MachinePtr make_machine(const std::string& selector, const ClientProgram& p) {
  if (selector == "treiber") return treiber_stack();
  if (selector == "atomic-stack") return atomic_stack();
  return sc_stack(push_literals(p));  // "sc-stack"; selectors are validated
}

std::string valuation_str(const Valuation& v) { return trace_to_string({v}); }

int do_check(const std::string& history, const std::string& mode, bool json,
             std::ostream& out) {
  CheckMode m =
      mode == "sc" ? CheckMode::SequentialConsistency : CheckMode::Linearizability;
  Verdict v = check_file(history, stack_spec(), m);
  if (json) {
    out << verdict_to_json(v) << "\n";
  } else {
    out << (m == CheckMode::SequentialConsistency ? "sequential consistency"
                                                  : "linearizability")
        << (v.holds ? ": holds" : ": refuted") << "\n";
    if (v.holds)
      out << "witness: " << (v.witness->empty() ? "(empty)" : format_history(*v.witness))
          << "\n";
  }
  return v.holds ? 0 : 1;
}

int do_explore(const std::string& program, const std::string& object, std::size_t budget,
               bool json, std::ostream& out) {
  ClientProgram p = load_program(program);
  ExploreOptions opts;
  opts.state_budget = budget;
  TraceSet ts = explore(p, make_machine(object, p), opts);
  if (json) {
    nlohmann::ordered_json j;
    j["variables"] = ts.variables;
    nlohmann::ordered_json traces = nlohmann::ordered_json::array();
    for (const ObservableTrace& t : ts.traces) {
      nlohmann::ordered_json jt = nlohmann::ordered_json::array();
      for (const Valuation& val : t) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (const Value& x : val) row.push_back(json_of(x));
        jt.push_back(std::move(row));
      }
      traces.push_back(std::move(jt));
    }
    j["traces"] = std::move(traces);
    nlohmann::ordered_json finals = nlohmann::ordered_json::array();
    for (const Valuation& val : ts.finals) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const Value& x : val) row.push_back(json_of(x));
      finals.push_back(std::move(row));
    }
    j["finals"] = std::move(finals);
    j["stats"]["states"] = ts.stats.states;
    j["stats"]["executions"] = ts.stats.executions;
    j["stats"]["traces"] = ts.stats.traces;
    j["stats"]["max_depth"] = ts.stats.max_depth;
    out << j.dump() << "\n";
  } else {
    out << "variables: ";
    for (std::size_t i = 0; i < ts.variables.size(); ++i)
      out << (i ? "," : "") << ts.variables[i];
    out << "\n";
    out << "traces (" << ts.traces.size() << "):\n";
    for (const ObservableTrace& t : ts.traces) out << "  " << trace_to_string(t) << "\n";
    out << "finals (" << ts.finals.size() << "):\n";
    for (const Valuation& v : ts.finals) out << "  " << valuation_str(v) << "\n";
    out << "states: " << ts.stats.states << "  executions: " << ts.stats.executions
        << "  max depth: " << ts.stats.max_depth << "\n";
  }
  return 0;
}

int do_refine(const std::string& program, const std::string& abstract_sel,
              const std::string& concrete_sel, const std::string& mode, std::size_t budget,
              bool json, std::ostream& out) {
  ClientProgram p = load_program(program);
  ExploreOptions opts;
  opts.state_budget = budget;
  RefinementVerdict v =
      mode == "final"
          ? observational_refines(p, make_machine(abstract_sel, p),
                                  make_machine(concrete_sel, p), opts)
          : contextual_refines(p, make_machine(abstract_sel, p),
                               make_machine(concrete_sel, p), opts);
  if (json) {
    out << verdict_to_json(v) << "\n";
  } else {
    out << (v.mode == RefinementMode::Trace ? "contextual trace refinement"
                                            : "observational refinement")
        << " (" << concrete_sel << " refines " << abstract_sel << "): "
        << (v.holds ? "holds" : "refuted") << "\n";
    if (!v.holds) out << "counterexample: " << trace_to_string(*v.counterexample) << "\n";
  }
  return v.holds ? 0 : 1;
}

void repro_example1(std::ostream& out) {
  ClientProgram p = program_example1();
  out << "Example 1: a fine-grained stack driven by two client threads\n\n";
  out << render_program(p) << "\n";
  ExploreOptions with_h;
  with_h.collect_histories = true;
  TraceSet tr = explore(p, treiber_stack(), with_h);
  TraceSet at = explore(p, atomic_stack());
  out << "treiber:      " << tr.traces.size() << " traces, " << tr.finals.size()
      << " final states, " << tr.histories.size() << " complete histories\n";
  out << "atomic-stack: " << at.traces.size() << " traces, " << at.finals.size()
      << " final states\n";
  RefinementVerdict v = contextual_refines(p, atomic_stack(), treiber_stack());
  out << "treiber refines atomic-stack (traces): " << (v.holds ? "holds" : "refuted")
      << "\n";
  out << "final states (x,y,z):\n";
  for (const Valuation& f : tr.finals) out << "  " << valuation_str(f) << "\n";
  const History& h = tr.histories.front();
  out << "sample emitted history:\n  " << format_history(h) << "\n";
  Verdict lin = is_linearizable(h, stack_spec());
  out << "linearizes as:\n  " << format_history(*lin.witness) << "\n";
}

void repro_sc2_counterexample(std::ostream& out) {
  ClientProgram p = program_sc2();
  out << "A sequentially consistent stack does not contextually trace-refine the atomic "
         "stack\n\n";
  out << render_program(p) << "\n";
  MachinePtr oracle = sc_stack(push_literals(p));
  RefinementVerdict tr = contextual_refines(p, atomic_stack(), oracle);
  out << "sc-stack refines atomic-stack (traces): " << (tr.holds ? "holds" : "refuted")
      << "\n";
  if (!tr.holds) {
    out << "counterexample over (x,y,z): " << trace_to_string(*tr.counterexample) << "\n";
    out << "schedule: T1 T2 T3 T4 U1 U2 U3 with the pops returning 1 then 2\n";
  }
  RefinementVerdict fin = observational_refines(p, atomic_stack(), oracle);
  out << "sc-stack refines atomic-stack (final states): "
      << (fin.holds ? "holds" : "refuted") << "\n";
  out << "the client is data independent, so sequential consistency preserves final "
         "states but not traces\n";
}

void repro_sc2_treiber(std::ostream& out) {
  out << "The Treiber stack contextually trace-refines the atomic stack\n\n";
  std::vector<std::pair<std::string, RefinementVerdict>> rows;
  for (const auto& [name, p] :
       {std::pair{"example1", program_example1()}, {"sc2", program_sc2()}})
    rows.emplace_back(name, contextual_refines(p, atomic_stack(), treiber_stack()));
  out << quantified_note(rows);
}

void repro_lin_vs_sc(std::ostream& out) {
  History h;
  h.events.push_back(invocation(1, "pop", Value::unit(), 0));
  h.events.push_back(response(1, "pop", Value::integer(1), 0));
  h.events.push_back(invocation(2, "push", Value::integer(1), 2));
  h.events.push_back(response(2, "push", Value::unit(), 2));
  out << "A history separating the two consistency criteria:\n  " << format_history(h)
      << "\n";
  Verdict sc = is_sequentially_consistent(h, stack_spec());
  out << "sequential consistency: " << (sc.holds ? "holds" : "refuted") << "\n";
  if (sc.holds) out << "witness:\n  " << format_history(*sc.witness) << "\n";
  Verdict lin = is_linearizable(h, stack_spec());
  out << "linearizability: " << (lin.holds ? "holds" : "refuted") << "\n";
  out << "the pop responds before the push is invoked, so real-time order pins the pop "
         "first and no legal reordering exists\n";
}

int do_repro(const std::string& name, std::ostream& out) {
  if (name == "example1")
    repro_example1(out);
  else if (name == "sc2-counterexample")
    repro_sc2_counterexample(out);
  else if (name == "sc2-treiber")
    repro_sc2_treiber(out);
  else
    repro_lin_vs_sc(out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"correctness workbench for concurrent objects"};
  app.name("linref");
  app.require_subcommand(1);
  const std::vector<std::string> selectors{"treiber", "atomic-stack", "sc-stack"};

  std::string history_file, check_mode = "lin", spec_name = "stack";
  bool check_json = false;
  CLI::App* check = app.add_subcommand("check", "check a history file for consistency");
  check->add_option("--history", history_file, "history JSON file")->required();
  check->add_option("--spec", spec_name, "sequential specification")
      ->check(CLI::IsMember({"stack"}));
  check->add_option("--mode", check_mode, "sc or lin")->check(CLI::IsMember({"sc", "lin"}));
  check->add_flag("--json", check_json, "JSON output");

  std::string explore_program, explore_object;
  std::size_t explore_budget = 1'000'000;
  bool explore_json = false;
  CLI::App* expl = app.add_subcommand("explore", "enumerate observable traces");
  expl->add_option("object", explore_object, "object machine")
      ->required()
      ->check(CLI::IsMember(selectors));
  expl->add_option("--program", explore_program, "builtin name or DSL file")->required();
  expl->add_option("--budget", explore_budget, "explorer state budget");
  expl->add_flag("--json", explore_json, "JSON output");

  std::string ref_program, ref_abstract, ref_concrete, ref_mode = "trace";
  std::size_t ref_budget = 1'000'000;
  bool ref_json = false;
  CLI::App* ref = app.add_subcommand("refine", "decide trace or final-state refinement");
  ref->add_option("--program", ref_program, "builtin name or DSL file")->required();
  ref->add_option("--abstract", ref_abstract, "abstract object")
      ->required()
      ->check(CLI::IsMember(selectors));
  ref->add_option("--concrete", ref_concrete, "concrete object")
      ->required()
      ->check(CLI::IsMember(selectors));
  ref->add_option("--mode", ref_mode, "trace or final")
      ->check(CLI::IsMember({"trace", "final"}));
  ref->add_option("--budget", ref_budget, "explorer state budget");
  ref->add_flag("--json", ref_json, "JSON output");

  std::string repro_name;
  CLI::App* rep = app.add_subcommand("repro", "reproduce a documented result");
  rep->add_option("example", repro_name, "which result")
      ->required()
      ->check(CLI::IsMember({"example1", "sc2-counterexample", "sc2-treiber", "lin-vs-sc"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  try {
    if (check->parsed()) return do_check(history_file, check_mode, check_json, out);
    if (expl->parsed())
      return do_explore(explore_program, explore_object, explore_budget, explore_json, out);
    if (ref->parsed())
      return do_refine(ref_program, ref_abstract, ref_concrete, ref_mode, ref_budget,
                       ref_json, out);
    return do_repro(repro_name, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace linref

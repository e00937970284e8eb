#include "linref/explorer.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace linref {
namespace {

struct CompiledStmt {
  enum class K { AssignConst, AssignVar, Invoke };
  K k = K::AssignConst;
  int target_kind = 0;  // 0 none, 1 shared, 2 local
  int target_idx = 0;
  int src_kind = 0;  // AssignVar source
  int src_idx = 0;
  Value constant;  // AssignConst source / call argument
  std::string op;
};

struct CompiledThread {
  int id = 0;
  std::size_t n_locals = 0;
  std::vector<CompiledStmt> body;
};

struct ThreadState {
  std::size_t next = 0;
  bool waiting = false;
  std::vector<Value> locals;
};

struct Global {
  Valuation shared;
  std::vector<ThreadState> threads;
  MachinePtr machine;
};

struct NodeResult {
  std::vector<int> traces;  // interned valuation-suffix ids
  std::vector<int> hists;   // interned event-suffix ids
  std::uint64_t execs = 0;
  std::size_t height = 0;  // longest execution from here, in steps
};

// Hash-consed list cells; id 0 is the empty list.
struct Lists {
  std::vector<std::pair<int, int>> cells{{-1, -1}};  // (payload id, tail list id)
  std::unordered_map<std::uint64_t, int> index;

  int cons(int head, int tail) {
    std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(head)) << 32) |
        static_cast<std::uint32_t>(tail);
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(cells.size()));
    if (fresh) cells.push_back({head, tail});
    return it->second;
  }
};

class Exploration {
 public:
  Exploration(const ClientProgram& p, MachinePtr machine, const ExploreOptions& opts)
      : p_(p), opts_(opts) {
    for (const ClientThread& th : p.threads) {
      CompiledThread ct;
      ct.id = th.id;
      std::vector<std::string> locals = p.locals(th.id);
      ct.n_locals = locals.size();
      for (const Statement& st : th.body) ct.body.push_back(compile(st, locals));
      threads_.push_back(std::move(ct));
    }
    root_.machine = std::move(machine);
    for (const auto& [name, v] : p.shared) root_.shared.push_back(v);
    for (const CompiledThread& ct : threads_)
      root_.threads.push_back({0, false, std::vector<Value>(ct.n_locals, Value::integer(0))});
  }

  TraceSet run() {
    const NodeResult& r = visit(root_);
    TraceSet out;
    for (const auto& [name, v] : p_.shared) out.variables.push_back(name);
    for (int sid : r.traces) {
      ObservableTrace t{root_.shared};
      for (int id = sid; id != 0; id = lists_.cells[id].second)
        t.push_back(valuations_[lists_.cells[id].first]);
      out.traces.push_back(std::move(t));
    }
    std::sort(out.traces.begin(), out.traces.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (const ObservableTrace& t : out.traces) out.finals.push_back(t.back());
    std::sort(out.finals.begin(), out.finals.end());
    out.finals.erase(std::unique(out.finals.begin(), out.finals.end()), out.finals.end());
    if (opts_.collect_histories) {
      for (int sid : r.hists) out.histories.push_back(history_of(sid));
      std::sort(out.histories.begin(), out.histories.end(), [](const auto& a, const auto& b) {
        return a.events.size() != b.events.size() ? a.events.size() < b.events.size() : a < b;
      });
    }
    out.stats.states = states_;
    out.stats.executions = r.execs;
    out.stats.traces = out.traces.size();
    out.stats.max_depth = r.height;
    return out;
  }

 private:
  CompiledStmt compile(const Statement& st, const std::vector<std::string>& locals) const {
    auto slot = [&](const std::string& name, int& kind, int& idx) {
      for (std::size_t i = 0; i < p_.shared.size(); ++i)
        if (p_.shared[i].first == name) {
          kind = 1;
          idx = static_cast<int>(i);
          return;
        }
      auto it = std::find(locals.begin(), locals.end(), name);
      if (it == locals.end()) throw std::invalid_argument("unknown variable " + name);
      kind = 2;
      idx = static_cast<int>(it - locals.begin());
    };
    CompiledStmt c;
    c.constant = st.constant;
    if (st.kind == Statement::Kind::Call) {
      c.k = CompiledStmt::K::Invoke;
      c.op = st.op;
      if (!st.target.empty()) slot(st.target, c.target_kind, c.target_idx);
    } else if (st.from_const) {
      c.k = CompiledStmt::K::AssignConst;
      slot(st.target, c.target_kind, c.target_idx);
    } else {
      c.k = CompiledStmt::K::AssignVar;
      slot(st.target, c.target_kind, c.target_idx);
      slot(st.source, c.src_kind, c.src_idx);
    }
    return c;
  }

  static void write_var(Global& g, std::size_t ti, int kind, int idx, const Value& v) {
    if (kind == 1)
      g.shared[idx] = v;
    else if (kind == 2)
      g.threads[ti].locals[idx] = v;
  }

  Value read_var(const Global& g, std::size_t ti, int kind, int idx) const {
    return kind == 1 ? g.shared[idx] : g.threads[ti].locals[idx];
  }

  std::string key_of(const Global& g) const {
    std::string k;
    for (const Value& v : g.shared) k += v.to_string() + ",";
    k += "|";
    for (const ThreadState& t : g.threads) {
      k += std::to_string(t.next) + (t.waiting ? "w" : "r");
      for (const Value& v : t.locals) k += v.to_string() + ",";
      k += ";";
    }
    k += "|";
    k += g.machine->state_key();
    return k;
  }

  std::vector<Global> successors(const Global& g) const {
    std::vector<Global> out;
    for (std::size_t ti = 0; ti < threads_.size(); ++ti) {
      const CompiledThread& ct = threads_[ti];
      const ThreadState& ts = g.threads[ti];
      if (ts.waiting) {
        if (g.machine->at_return(ct.id)) {
          auto r = g.machine->try_return(ct.id);
          assert(r.has_value());
          Global n = g;
          n.machine = r->second;
          const CompiledStmt& st = ct.body[ts.next];
          write_var(n, ti, st.target_kind, st.target_idx, r->first);
          n.threads[ti].waiting = false;
          ++n.threads[ti].next;
          out.push_back(std::move(n));
        } else {
          for (MachinePtr m : g.machine->step(ct.id)) {
            Global n = g;
            n.machine = std::move(m);
            out.push_back(std::move(n));
          }
        }
      } else if (ts.next < ct.body.size()) {
        const CompiledStmt& st = ct.body[ts.next];
        Global n = g;
        if (st.k == CompiledStmt::K::Invoke) {
          n.machine = g.machine->invoke(ct.id, st.op, st.constant);
          n.threads[ti].waiting = true;  // next stays on the call until the response
        } else {
          Value v = st.k == CompiledStmt::K::AssignConst
                        ? st.constant
                        : read_var(g, ti, st.src_kind, st.src_idx);
          write_var(n, ti, st.target_kind, st.target_idx, v);
          ++n.threads[ti].next;
        }
        out.push_back(std::move(n));
      }
    }
    if (opts_.reverse_successor_order) std::reverse(out.begin(), out.end());
    return out;
  }

  const NodeResult& visit(const Global& g) {
    std::string key = key_of(g);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!on_path_.insert(key).second)
      throw std::logic_error("internal error: cyclic state graph");
    if (++states_ > opts_.state_budget) throw BudgetExceededError(states_);

    NodeResult res;
    std::vector<Global> succs = successors(g);
    if (succs.empty()) {
      if (g.machine->retain_execution()) {
        res.execs = 1;
        res.traces.push_back(0);
        if (opts_.collect_histories) res.hists.push_back(0);
      }
    } else {
      std::size_t base_events = g.machine->emitted().events.size();
      for (const Global& s : succs) {
        const NodeResult& child = visit(s);
        res.execs += child.execs;
        res.height = std::max(res.height, child.height + 1);
        if (s.shared == g.shared) {
          res.traces.insert(res.traces.end(), child.traces.begin(), child.traces.end());
        } else {
          int vid = valuation_id(s.shared);
          for (int t : child.traces) res.traces.push_back(lists_.cons(vid, t));
        }
        if (opts_.collect_histories) {
          const auto& ev = s.machine->emitted().events;
          for (int h : child.hists) {
            int id = h;
            for (std::size_t i = ev.size(); i > base_events; --i)
              id = lists_.cons(event_id(ev[i - 1]), id);
            res.hists.push_back(id);
          }
        }
      }
      auto dedup = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      dedup(res.traces);
      dedup(res.hists);
    }
    on_path_.erase(key);
    return memo_.emplace(std::move(key), std::move(res)).first->second;
  }

  int valuation_id(const Valuation& v) {
    auto [it, fresh] = valuation_index_.try_emplace(v, static_cast<int>(valuations_.size()));
    if (fresh) valuations_.push_back(v);
    return it->second;
  }

  int event_id(const Event& e) {
    auto key = std::make_tuple(e.kind == EventKind::Invocation, e.thread, e.op, e.payload);
    auto [it, fresh] = event_index_.try_emplace(key, static_cast<int>(events_.size()));
    if (fresh) events_.push_back(e);
    return it->second;
  }

  // Reassembles a complete history from an event-suffix id; op_instance
  // ids are positional (invocation event index), the canonical form.
  History history_of(int sid) const {
    History h;
    std::map<int, int> open;  // thread -> op_instance
    for (int id = sid; id != 0; id = lists_.cells[id].second) {
      Event e = events_[lists_.cells[id].first];
      if (e.kind == EventKind::Invocation) {
        e.op_instance = static_cast<int>(h.events.size());
        open[e.thread] = e.op_instance;
      } else {
        e.op_instance = open.at(e.thread);
      }
      h.events.push_back(std::move(e));
    }
    return h;
  }

  const ClientProgram& p_;
  ExploreOptions opts_;
  std::vector<CompiledThread> threads_;
  Global root_;
  Lists lists_;
  std::vector<Valuation> valuations_;
  std::map<Valuation, int> valuation_index_;
  std::vector<Event> events_;
  std::map<std::tuple<bool, int, std::string, Value>, int> event_index_;
  std::unordered_map<std::string, NodeResult> memo_;
  std::unordered_set<std::string> on_path_;
  std::size_t states_ = 0;
};

}  // namespace

TraceSet explore(const ClientProgram& p, const MachinePtr& o, const ExploreOptions& opts) {
  return Exploration(p, o, opts).run();
}

std::vector<Valuation> final_states(const ClientProgram& p, const MachinePtr& o,
                                    const ExploreOptions& opts) {
  return explore(p, o, opts).finals;
}

ExploreStats count_states(const ClientProgram& p, const MachinePtr& o,
                          const ExploreOptions& opts) {
  return explore(p, o, opts).stats;
}

ObservableTrace stutter_reduce(const ObservableTrace& trace) {
  ObservableTrace out;
  for (const Valuation& v : trace)
    if (out.empty() || out.back() != v) out.push_back(v);
  return out;
}

}  // namespace linref

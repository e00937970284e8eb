#include "linref/checkers.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "linref/json_io.hpp"

namespace linref {

namespace {

template <class V>
void grow_to(V& v, std::size_t n) {
  if (v.size() < n) v.resize(n);
}

Verdict holds_verdict(History witness) {
  std::string note = witness.events.empty() ? "empty witness" : "witness found";
  return Verdict{true, std::move(witness), std::move(note)};
}

Verdict fails_verdict() { return Verdict{false, std::nullopt, "no witness"}; }

// Incremental witness search: commit one call at a time, candidates in
// ascending invocation-index order (first success is therefore the
// lexicographically least witness), pruning by spec legality, by
// real-time schedulability in Linearizability mode, and by memoized
// refuted (per-thread positions, spec state) pairs.
constexpr std::size_t kFlatMemoLimit = 4096;

struct Search {
  const SeqObjectSpec& spec;
  const CheckMode mode;
  CheckerScratch& s;
  int n_threads = 0;
  int n_active = 0;
  bool memoizable = false;
  bool flat_memo = false;

  Search(const SeqObjectSpec& spec, CheckMode mode, CheckerScratch& s)
      : spec(spec), mode(mode), s(s) {}

  int slot_of(int thread_id) {
    for (int u = 0; u < static_cast<int>(s.thread_ids.size()); ++u) {
      if (s.thread_ids[u] == thread_id) return u;
    }
    s.thread_ids.push_back(thread_id);
    s.open_call.push_back(-1);
    return static_cast<int>(s.thread_ids.size()) - 1;
  }

  void prepare(const History& h) {
    s.calls.clear();
    s.thread_ids.clear();
    s.open_call.clear();
    s.pending.clear();
    s.domain.clear();
    for (int i = 0; i < static_cast<int>(h.events.size()); ++i) {
      const Event& e = h.events[i];
      const int slot = slot_of(e.thread);
      if (e.kind == EventKind::Invocation) {
        CheckerScratch::Call c;
        c.thread_slot = slot;
        c.inv_idx = i;
        c.op_instance = e.op_instance;
        c.thread_id = e.thread;
        c.op = e.op;
        c.arg = e.payload;
        s.open_call[slot] = static_cast<int>(s.calls.size());
        s.calls.push_back(c);
        if (e.op == "push" && e.payload.is_int()) s.domain.push_back(e.payload);
      } else if (s.open_call[slot] >= 0) {
        CheckerScratch::Call& c = s.calls[s.open_call[slot]];
        c.resp_idx = i;
        c.ret = e.payload;
        s.open_call[slot] = -1;
      }
    }
    std::sort(s.domain.begin(), s.domain.end());
    s.domain.erase(std::unique(s.domain.begin(), s.domain.end()), s.domain.end());
    n_threads = static_cast<int>(s.thread_ids.size());

    for (int ci = 0; ci < static_cast<int>(s.calls.size()); ++ci) {
      if (s.calls[ci].resp_idx < 0) s.pending.push_back(ci);
    }
    grow_to(s.pending_values, s.pending.size());
    for (std::size_t k = 0; k < s.pending.size(); ++k) {
      std::vector<Value>& vals = s.pending_values[k];
      vals.clear();
      const std::string_view op = s.calls[s.pending[k]].op;
      if (op == "push") {
        vals.push_back(Value::unit());
      } else {
        vals = s.domain;
        vals.push_back(Value::empty());
        if (op != "pop") vals.push_back(Value::unit());
      }
    }
  }

  // Installs the completion selected by the odometer: inactive = dropped.
  void setup_completion() {
    for (CheckerScratch::Call& c : s.calls) c.active = true;
    for (std::size_t k = 0; k < s.pending.size(); ++k) {
      CheckerScratch::Call& c = s.calls[s.pending[k]];
      c.active = s.choice[k] > 0;
      if (c.active) c.ret = s.pending_values[k][s.choice[k] - 1];
    }

    grow_to(s.by_thread, static_cast<std::size_t>(n_threads));
    for (int u = 0; u < n_threads; ++u) s.by_thread[u].clear();
    n_active = 0;
    for (int ci = 0; ci < static_cast<int>(s.calls.size()); ++ci) {
      CheckerScratch::Call& c = s.calls[ci];
      if (!c.active) continue;
      c.idx_in_thread = static_cast<int>(s.by_thread[c.thread_slot].size());
      s.by_thread[c.thread_slot].push_back(ci);
      ++n_active;
    }

    memoizable = n_threads <= 10;
    for (int u = 0; u < n_threads; ++u) {
      if (s.by_thread[u].size() > 63) memoizable = false;
    }
    std::size_t flat_size = 1;
    for (int u = 0; u < n_threads && flat_size <= kFlatMemoLimit; ++u) {
      flat_size *= s.by_thread[u].size() + 1;
    }
    flat_memo = flat_size <= kFlatMemoLimit;
    if (flat_memo) {
      s.stride.assign(static_cast<std::size_t>(n_threads), 1);
      for (int u = n_threads - 2; u >= 0; --u) {
        s.stride[u] = s.stride[u + 1] * (s.by_thread[u + 1].size() + 1);
      }
      grow_to(s.flat_failed, flat_size);
      if (s.flat_epoch.size() < flat_size) s.flat_epoch.resize(flat_size, 0);
      ++s.epoch;
    }

    if (mode == CheckMode::Linearizability) {
      s.needed.assign(s.calls.size() * static_cast<std::size_t>(n_threads), 0);
      for (int ci = 0; ci < static_cast<int>(s.calls.size()); ++ci) {
        if (!s.calls[ci].active) continue;
        int* need = s.needed.data() + static_cast<std::size_t>(ci) * n_threads;
        for (const CheckerScratch::Call& d : s.calls) {
          if (d.active && d.resp_idx >= 0 && d.resp_idx < s.calls[ci].inv_idx) {
            ++need[d.thread_slot];
          }
        }
      }
    }

    s.pos.assign(static_cast<std::size_t>(n_threads), 0);
    grow_to(s.path, static_cast<std::size_t>(n_active));
    grow_to(s.state_stack, static_cast<std::size_t>(n_active) + 1);
    grow_to(s.outcome_stack, static_cast<std::size_t>(n_active) + 1);
    grow_to(s.cand_stack, static_cast<std::size_t>(n_active) + 1);
    s.state_stack[0] = spec.initial_state();
    if (!flat_memo) s.failed.clear();
  }

  std::vector<SeqObjectSpec::State>* refuted_slot() {
    if (flat_memo) {
      std::size_t idx = 0;
      for (int u = 0; u < n_threads; ++u) idx += s.stride[u] * std::size_t(s.pos[u]);
      if (s.flat_epoch[idx] != s.epoch) {
        s.flat_epoch[idx] = s.epoch;
        s.flat_failed[idx].clear();
      }
      return &s.flat_failed[idx];
    }
    return &s.failed.try_emplace(pack_pos()).first->second;
  }

  std::uint64_t pack_pos() const {
    std::uint64_t key = 0;
    for (int u = 0; u < n_threads; ++u) key = (key << 6) | std::uint64_t(s.pos[u]);
    return key;
  }

  bool schedulable(int ci) const {
    const int* need = s.needed.data() + static_cast<std::size_t>(ci) * n_threads;
    for (int u = 0; u < n_threads; ++u) {
      if (s.pos[u] < need[u]) return false;
    }
    return true;
  }

  bool dfs(int depth) {
    if (depth == n_active) return true;

    std::vector<SeqObjectSpec::State>* refuted = nullptr;
    if (flat_memo || memoizable) {
      refuted = refuted_slot();
      const SeqObjectSpec::State& here = s.state_stack[depth];
      for (const SeqObjectSpec::State& f : *refuted) {
        if (f == here) return false;
      }
    }

    auto& cands = s.cand_stack[depth];
    cands.clear();
    for (int u = 0; u < n_threads; ++u) {
      if (s.pos[u] < static_cast<int>(s.by_thread[u].size())) {
        cands.emplace_back(s.calls[s.by_thread[u][s.pos[u]]].inv_idx, u);
      }
    }
    std::sort(cands.begin(), cands.end());

    for (const auto& [inv_idx, u] : cands) {
      (void)inv_idx;
      const int ci = s.by_thread[u][s.pos[u]];
      const CheckerScratch::Call& c = s.calls[ci];
      if (mode == CheckMode::Linearizability && !schedulable(ci)) continue;

      auto& outs = s.outcome_stack[depth];
      try {
        spec.step_into(s.state_stack[depth], c.op, c.arg, outs);
      } catch (const SpecDomainError&) {
        continue;
      }
      ++s.pos[u];
      s.path[depth] = ci;
      bool found = false;
      for (const SeqObjectSpec::Outcome& o : outs) {
        if (o.ret != c.ret) continue;
        s.state_stack[depth + 1] = o.next;
        if (dfs(depth + 1)) {
          found = true;
          break;
        }
      }
      --s.pos[u];
      if (found) return true;
    }

    if (refuted) refuted->push_back(s.state_stack[depth]);
    return false;
  }

  // Completions in the history module's enumeration order: per pending
  // call, drop first, then each completion value.
  bool run() {
    const std::size_t m = s.pending.size();
    s.choice.assign(m, 0);
    for (;;) {
      setup_completion();
      if (dfs(0)) return true;
      std::size_t k = m;
      bool more = false;
      while (k > 0) {
        --k;
        if (++s.choice[k] <= s.pending_values[k].size()) {
          more = true;
          break;
        }
        s.choice[k] = 0;
        if (k == 0) break;
      }
      if (!more) return false;
    }
  }

  History witness() const {
    History w;
    w.events.reserve(2 * static_cast<std::size_t>(n_active));
    for (int d = 0; d < n_active; ++d) {
      const CheckerScratch::Call& c = s.calls[s.path[d]];
      w.events.push_back(invocation(c.thread_id, std::string(c.op), c.arg, c.op_instance));
      w.events.push_back(response(c.thread_id, std::string(c.op), c.ret, c.op_instance));
    }
    return w;
  }
};

}  // namespace

Verdict check_history(const History& h, const SeqObjectSpec& spec, CheckMode mode,
                      CheckerScratch& scratch) {
  Search search(spec, mode, scratch);
  search.prepare(h);
  if (search.run()) return holds_verdict(search.witness());
  return fails_verdict();
}

Verdict check_history(const History& h, const SeqObjectSpec& spec, CheckMode mode) {
  if (auto v = validate_history(h)) throw InvalidHistoryError(*v);
  CheckerScratch scratch;
  return check_history(h, spec, mode, scratch);
}

Verdict is_sequentially_consistent(const History& h, const SeqObjectSpec& spec) {
  return check_history(h, spec, CheckMode::SequentialConsistency);
}

Verdict is_linearizable(const History& h, const SeqObjectSpec& spec) {
  return check_history(h, spec, CheckMode::Linearizability);
}

namespace {

struct BruteScratch {
  std::vector<int> tids;
  std::vector<std::vector<int>> seqs;
  std::vector<int> heads;
  std::vector<int> order;
  std::vector<SeqObjectSpec::State> states;
  std::vector<std::vector<SeqObjectSpec::Outcome>> outcomes;
  std::vector<std::vector<std::pair<int, int>>> cands;
};

// The oracle keeps no memo and applies the real-time filter only on fully
// built permutations, so it shares no pruning machinery with Search
// beyond candidate order (which fixes the same witness tie-break).
struct Brute {
  const SeqObjectSpec& spec;
  const CheckMode mode;
  const std::vector<OpCall>& calls;
  BruteScratch& b;
  int n_slots = 0;

  Brute(const SeqObjectSpec& spec, CheckMode mode, const std::vector<OpCall>& calls,
        BruteScratch& b)
      : spec(spec), mode(mode), calls(calls), b(b) {
    b.tids.clear();
    for (int ci = 0; ci < static_cast<int>(calls.size()); ++ci) {
      const auto it = std::find(b.tids.begin(), b.tids.end(), calls[ci].thread);
      const auto slot = static_cast<std::size_t>(it - b.tids.begin());
      if (it == b.tids.end()) {
        b.tids.push_back(calls[ci].thread);
        grow_to(b.seqs, b.tids.size());
        b.seqs[slot].clear();
      }
      b.seqs[slot].push_back(ci);
    }
    n_slots = static_cast<int>(b.tids.size());
    b.heads.assign(b.tids.size(), 0);
    b.order.clear();
    b.order.reserve(calls.size());
    grow_to(b.states, calls.size() + 1);
    grow_to(b.outcomes, calls.size() + 1);
    grow_to(b.cands, calls.size() + 1);
    b.states[0] = spec.initial_state();
  }

  bool respects_real_time() const {
    for (std::size_t i = 0; i + 1 < b.order.size(); ++i) {
      for (std::size_t j = i + 1; j < b.order.size(); ++j) {
        const OpCall& before = calls[b.order[i]];
        const OpCall& after = calls[b.order[j]];
        if (*after.response_index < before.invocation_index) return false;
      }
    }
    return true;
  }

  bool enumerate(std::size_t depth) {
    if (depth == calls.size()) {
      return mode != CheckMode::Linearizability || respects_real_time();
    }
    auto& here = b.cands[depth];
    here.clear();
    for (int u = 0; u < n_slots; ++u) {
      if (b.heads[u] < static_cast<int>(b.seqs[u].size())) {
        here.emplace_back(calls[b.seqs[u][b.heads[u]]].invocation_index, u);
      }
    }
    std::sort(here.begin(), here.end());
    for (const auto& [inv_idx, u] : here) {
      (void)inv_idx;
      const int ci = b.seqs[u][b.heads[u]];
      const OpCall& c = calls[ci];
      auto& outs = b.outcomes[depth];
      try {
        spec.step_into(b.states[depth], c.op, c.argument, outs);
      } catch (const SpecDomainError&) {
        continue;
      }
      ++b.heads[u];
      b.order.push_back(ci);
      bool found = false;
      for (const SeqObjectSpec::Outcome& o : outs) {
        if (o.ret != *c.result) continue;
        b.states[depth + 1] = o.next;
        if (enumerate(depth + 1)) {
          found = true;
          break;
        }
      }
      if (found) return true;
      b.order.pop_back();
      --b.heads[u];
    }
    return false;
  }

  History witness() const {
    History w;
    w.events.reserve(2 * b.order.size());
    for (const int ci : b.order) {
      const OpCall& c = calls[ci];
      w.events.push_back(invocation(c.thread, c.op, c.argument, c.op_instance));
      w.events.push_back(response(c.thread, c.op, *c.result, c.op_instance));
    }
    return w;
  }
};

}  // namespace

Verdict brute_force_check(const History& h, const SeqObjectSpec& spec, CheckMode mode) {
  if (auto v = validate_history(h)) throw InvalidHistoryError(*v);
  static thread_local BruteScratch scratch;  // buffers only; no state crosses calls
  const std::vector<OpCall> top_calls = op_calls(h);
  if (top_calls.size() > 10) throw OracleBoundError();
  const bool complete =
      std::none_of(top_calls.begin(), top_calls.end(), [](const OpCall& c) { return c.pending(); });
  if (complete) {
    Brute brute(spec, mode, top_calls, scratch);
    if (brute.enumerate(0)) return holds_verdict(brute.witness());
    return fails_verdict();
  }
  for (const History& completion : completions(h)) {
    const std::vector<OpCall> calls = op_calls(completion);
    Brute brute(spec, mode, calls, scratch);
    if (brute.enumerate(0)) return holds_verdict(brute.witness());
  }
  return fails_verdict();
}

Verdict check_file(const std::string& path, const SeqObjectSpec& spec, CheckMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HistoryParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  History h = parse_history_json(buffer.str());
  return check_history(h, spec, mode);
}

std::string verdict_to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["holds"] = v.holds;
  j["witness"] = v.witness ? json_of(*v.witness) : nlohmann::ordered_json(nullptr);
  j["note"] = v.note;
  return j.dump();
}

}  // namespace linref

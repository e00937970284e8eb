#include "linref/sc_oracle.hpp"

#include <algorithm>

#include "linref/checkers.hpp"

namespace linref {
namespace {

struct OracleFrame {
  std::string op;
  Value arg;
  bool done = false;
  Value ret;
};

class OracleMachine final : public ObjectMachine {
 public:
  OracleMachine(SeqObjectSpec spec, std::vector<Value> domain)
      : spec_(std::make_shared<SeqObjectSpec>(std::move(spec))), domain_(std::move(domain)) {
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
  }

  std::string_view name() const override { return "sc-oracle"; }

  bool idle(int thread) const override { return find_frame(thread) == nullptr; }

  bool at_return(int thread) const override {
    const OracleFrame* f = find_frame(thread);
    return f && f->done;
  }

  MachinePtr invoke(int thread, std::string_view op, const Value& arg) const override {
    if (find_frame(thread)) throw PendingOperationError();
    if (op == "push" && !arg.is_int())
      throw SpecDomainError("reserved value as push argument");
    auto next = std::make_shared<OracleMachine>(*this);
    next->insert_frame(thread, {std::string(op), arg, false, Value::unit()});
    return next;
  }

  std::vector<MachinePtr> step(int thread) const override {
    const OracleFrame* f = find_frame(thread);
    if (!f) throw NoActiveOperationError();
    if (f->done) {
      auto next = std::make_shared<OracleMachine>(*this);
      next->erase_frame(thread);
      return {next};
    }
    // One successor per candidate return value; the call is logged
    // (appended to the emitted history) at this single atomic step.
    // No consistency is enforced here — bad logs are rejected only at
    // the end of the execution by retain_execution.
    std::vector<MachinePtr> out;
    if (f->op == "push") {
      out.push_back(committed(thread, Value::unit()));
    } else {
      out.reserve(domain_.size());
      for (const Value& v : domain_) out.push_back(committed(thread, v));
    }
    return out;
  }

  std::optional<std::pair<Value, MachinePtr>> try_return(int thread) const override {
    const OracleFrame* f = find_frame(thread);
    if (!f) throw NoActiveOperationError();
    if (!f->done) return std::nullopt;
    auto next = std::make_shared<OracleMachine>(*this);
    next->erase_frame(thread);
    return {{f->ret, std::move(next)}};
  }

  const History& emitted() const override { return emitted_; }

  bool retain_execution() const override {
    return is_sequentially_consistent(emitted_, *spec_).holds;
  }

  std::string state_key() const override {
    // Retention depends on the whole call log, so unlike the other
    // machines the key covers the emitted history.
    std::string key = "L=" + format_history(emitted_) + ";F=";
    for (const auto& [t, f] : frames_) {
      key += std::to_string(t) + ":" + f.op + "," + f.arg.to_string() + "," +
             (f.done ? "d" : "r") + "," + f.ret.to_string() + ";";
    }
    return key;
  }

 private:
  MachinePtr committed(int thread, const Value& ret) const {
    auto next = std::make_shared<OracleMachine>(*this);
    OracleFrame& g = *next->find_frame(thread);
    g.done = true;
    g.ret = ret;
    int inst = static_cast<int>(next->emitted_.events.size());
    Value inv_payload = g.op == "push" ? g.arg : Value::unit();
    next->emitted_.events.push_back({EventKind::Invocation, thread, g.op, inv_payload, inst});
    next->emitted_.events.push_back({EventKind::Response, thread, g.op, ret, inst});
    return next;
  }

  const OracleFrame* find_frame(int thread) const {
    for (const auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  OracleFrame* find_frame(int thread) {
    for (auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  void insert_frame(int thread, OracleFrame f) {
    auto it = std::lower_bound(frames_.begin(), frames_.end(), thread,
                               [](const auto& p, int t) { return p.first < t; });
    frames_.insert(it, {thread, std::move(f)});
  }
  void erase_frame(int thread) {
    for (auto it = frames_.begin(); it != frames_.end(); ++it)
      if (it->first == thread) {
        frames_.erase(it);
        return;
      }
  }

  std::shared_ptr<const SeqObjectSpec> spec_;
  std::vector<Value> domain_;
  std::vector<std::pair<int, OracleFrame>> frames_;  // sorted by thread
  History emitted_;
};

}  // namespace

MachinePtr sc_oracle(SeqObjectSpec spec, std::vector<Value> domain) {
  return std::make_shared<OracleMachine>(std::move(spec), std::move(domain));
}

MachinePtr sc_stack(std::vector<Value> push_values) {
  push_values.push_back(Value::empty());
  return sc_oracle(stack_spec(), std::move(push_values));
}

}  // namespace linref

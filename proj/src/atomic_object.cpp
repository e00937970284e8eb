#include "linref/atomic_object.hpp"

#include <algorithm>
#include <cassert>

namespace linref {
namespace {

struct AtomicFrame {
  std::string op;
  Value arg;
  bool done = false;  // effect step taken, return value ready
  Value ret;
};

class AtomicMachine final : public ObjectMachine {
 public:
  explicit AtomicMachine(SeqObjectSpec spec)
      : spec_(std::make_shared<SeqObjectSpec>(std::move(spec))),
        state_(spec_->initial_state()) {}

  std::string_view name() const override { return "atomic"; }

  bool idle(int thread) const override { return find_frame(thread) == nullptr; }

  bool at_return(int thread) const override {
    const AtomicFrame* f = find_frame(thread);
    return f && f->done;
  }

  MachinePtr invoke(int thread, std::string_view op, const Value& arg) const override {
    if (find_frame(thread)) throw PendingOperationError();
    auto next = std::make_shared<AtomicMachine>(*this);
    next->insert_frame(thread, {std::string(op), arg, false, Value::unit()});
    return next;
  }

  std::vector<MachinePtr> step(int thread) const override {
    const AtomicFrame* f = find_frame(thread);
    if (!f) throw NoActiveOperationError();
    if (f->done) {
      auto next = std::make_shared<AtomicMachine>(*this);
      next->erase_frame(thread);
      return {next};
    }
    // The whole operation in one transition: spec effect plus the
    // invocation/response pair, so the emitted history stays sequential.
    auto outcomes = spec_->step(state_, f->op, f->arg);
    std::vector<MachinePtr> out;
    out.reserve(outcomes.size());
    for (auto& oc : outcomes) {
      auto next = std::make_shared<AtomicMachine>(*this);
      next->state_ = std::move(oc.next);
      AtomicFrame& g = *next->find_frame(thread);
      g.done = true;
      g.ret = oc.ret;
      int inst = static_cast<int>(next->emitted_.events.size());
      Value inv_payload = g.op == "push" ? g.arg : Value::unit();
      next->emitted_.events.push_back({EventKind::Invocation, thread, g.op, inv_payload, inst});
      next->emitted_.events.push_back({EventKind::Response, thread, g.op, g.ret, inst});
      out.push_back(std::move(next));
    }
    return out;
  }

  std::optional<std::pair<Value, MachinePtr>> try_return(int thread) const override {
    const AtomicFrame* f = find_frame(thread);
    if (!f) throw NoActiveOperationError();
    if (!f->done) return std::nullopt;
    auto next = std::make_shared<AtomicMachine>(*this);
    next->erase_frame(thread);
    return {{f->ret, std::move(next)}};
  }

  const History& emitted() const override { return emitted_; }

  std::string state_key() const override {
    std::string key = "s=";
    for (const Value& v : state_) key += v.to_string() + ",";
    key += ";F=";
    for (const auto& [t, f] : frames_) {
      key += std::to_string(t) + ":" + f.op + "," + f.arg.to_string() + "," +
             (f.done ? "d" : "r") + "," + f.ret.to_string() + ";";
    }
    return key;
  }

 private:
  const AtomicFrame* find_frame(int thread) const {
    for (const auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  AtomicFrame* find_frame(int thread) {
    for (auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  void insert_frame(int thread, AtomicFrame f) {
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

  std::shared_ptr<const SeqObjectSpec> spec_;  // shared across successors
  SeqObjectSpec::State state_;
  std::vector<std::pair<int, AtomicFrame>> frames_;  // sorted by thread
  History emitted_;
};

}  // namespace

MachinePtr atomic_object(SeqObjectSpec spec) {
  return std::make_shared<AtomicMachine>(std::move(spec));
}

MachinePtr atomic_stack() { return atomic_object(stack_spec()); }

}  // namespace linref

#include "linref/object_machine.hpp"

#include <algorithm>
#include <cassert>

#include "linref/seq_spec.hpp"

namespace linref {
namespace {

constexpr int kNull = -1;

// Program labels of fig-style Treiber code. Failed CASes retry from the
// head re-read (H3 / P1).
enum Label : int {
  H1,  // n := new node
  H2,  // n.val := v
  H3,  // ss := Head
  H4,  // n.next := ss
  H5,  // CAS(Head, ss, n), else goto H3
  H6,  // return UNIT
  P1,  // ss := Head
  P2,  // if ss = null goto P3 else P4
  P3,  // return EMPTY
  P4,  // ssn := ss.next
  P5,  // lv := ss.val
  P6,  // CAS(Head, ss, ssn), else goto P1
  P7,  // return lv
};

struct Node {
  Value val;
  int next = kNull;
};

struct Frame {
  int thread = 0;
  bool push = false;
  Value arg;
  int pc = H1;
  int inst = 0;  // op_instance of the emitted invocation
  int n = kNull, ss = kNull, ssn = kNull;
  Value lv;
};

class TreiberMachine final : public ObjectMachine {
 public:
  explicit TreiberMachine(int first_node_id) : next_id_(first_node_id) {}

  std::string_view name() const override { return "treiber"; }

  bool idle(int thread) const override { return find_frame(thread) == nullptr; }

  bool at_return(int thread) const override {
    const Frame* f = find_frame(thread);
    return f && (f->pc == H6 || f->pc == P3 || f->pc == P7);
  }

  MachinePtr invoke(int thread, std::string_view op, const Value& arg) const override {
    if (find_frame(thread)) throw PendingOperationError();
    bool push = op == "push";
    if (!push && op != "pop")
      throw SpecDomainError("unknown operation: " + std::string(op));
    if (push && !arg.is_int())
      throw SpecDomainError("reserved value as push argument");
    auto next = std::make_shared<TreiberMachine>(*this);
    Frame f;
    f.thread = thread;
    f.push = push;
    f.arg = arg;
    f.pc = push ? H1 : P1;
    f.inst = static_cast<int>(next->emitted_.events.size());
    next->emitted_.events.push_back(
        {EventKind::Invocation, thread, std::string(op), push ? arg : Value::unit(), f.inst});
    next->insert_frame(f);
    return next;
  }

  std::vector<MachinePtr> step(int thread) const override {
    const Frame* f = find_frame(thread);
    if (!f) throw NoActiveOperationError();
    if (at_return(thread)) return {do_return(thread).second};
    auto next = std::make_shared<TreiberMachine>(*this);
    Frame& g = *next->find_frame(thread);
    switch (g.pc) {
      case H1:
        g.n = next->next_id_++;
        next->nodes_.emplace_back(g.n, Node{});
        g.pc = H2;
        break;
      case H2:
        next->node(g.n).val = g.arg;
        g.pc = H3;
        break;
      case H3:
        g.ss = next->head_;
        g.pc = H4;
        break;
      case H4:
        next->node(g.n).next = g.ss;
        g.pc = H5;
        break;
      case H5:
        if (next->head_ == g.ss) {
          next->head_ = g.n;
          g.pc = H6;
        } else {
          g.pc = H3;
        }
        break;
      case P1:
        g.ss = next->head_;
        g.pc = P2;
        break;
      case P2:
        g.pc = g.ss == kNull ? P3 : P4;
        break;
      case P4:
        g.ssn = next->node(g.ss).next;
        g.pc = P5;
        break;
      case P5:
        g.lv = next->node(g.ss).val;
        g.pc = P6;
        break;
      case P6:
        if (next->head_ == g.ss) {
          next->head_ = g.ssn;
          g.pc = P7;
        } else {
          g.pc = P1;
        }
        break;
      default:
        assert(false);
    }
    return {next};
  }

  std::optional<std::pair<Value, MachinePtr>> try_return(int thread) const override {
    if (!find_frame(thread)) throw NoActiveOperationError();
    if (!at_return(thread)) return std::nullopt;
    return do_return(thread);
  }

  const History& emitted() const override { return emitted_; }

  std::string state_key() const override {
    // Nodes in canonical visit order (head chain, then frame references,
    // then closure over next pointers), with ids renamed to that order.
    // Unreachable garbage and the emitted history are excluded: neither
    // influences future steps.
    std::vector<int> ordered;
    auto canon = [&](int id) -> int {
      if (id == kNull) return -1;
      for (std::size_t i = 0; i < ordered.size(); ++i)
        if (ordered[i] == id) return static_cast<int>(i);
      ordered.push_back(id);
      return static_cast<int>(ordered.size()) - 1;
    };
    for (int id = head_; id != kNull; id = node_at(id).next) canon(id);
    for (const auto& [t, f] : frames_) {
      canon(f.n);
      canon(f.ss);
      canon(f.ssn);
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) canon(node_at(ordered[i]).next);

    std::string key = "h=" + std::to_string(canon(head_));
    key += ";N=";
    for (int id : ordered) {
      const Node& nd = node_at(id);
      key += "(" + nd.val.to_string() + "," + std::to_string(canon(nd.next)) + ")";
    }
    key += ";F=";
    for (const auto& [t, f] : frames_) {
      key += std::to_string(t) + (f.push ? ":push:" : ":pop:") + std::to_string(f.pc) + "," +
             f.arg.to_string() + "," + f.lv.to_string() + "," + std::to_string(canon(f.n)) + "," +
             std::to_string(canon(f.ss)) + "," + std::to_string(canon(f.ssn)) + ";";
    }
    return key;
  }

 private:
  std::pair<Value, MachinePtr> do_return(int thread) const {
    auto next = std::make_shared<TreiberMachine>(*this);
    Frame& g = *next->find_frame(thread);
    Value ret = g.pc == H6 ? Value::unit() : g.pc == P3 ? Value::empty() : g.lv;
    next->emitted_.events.push_back(
        {EventKind::Response, thread, g.push ? "push" : "pop", ret, g.inst});
    next->erase_frame(thread);
    return {ret, std::move(next)};
  }

  const Frame* find_frame(int thread) const {
    for (const auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  Frame* find_frame(int thread) {
    for (auto& [t, f] : frames_)
      if (t == thread) return &f;
    return nullptr;
  }
  void insert_frame(const Frame& f) {
    auto it = std::lower_bound(frames_.begin(), frames_.end(), f.thread,
                               [](const auto& p, int t) { return p.first < t; });
    frames_.insert(it, {f.thread, f});
  }
  void erase_frame(int thread) {
    for (auto it = frames_.begin(); it != frames_.end(); ++it)
      if (it->first == thread) {
        frames_.erase(it);
        return;
      }
  }
  const Node& node_at(int id) const {
    for (const auto& [i, nd] : nodes_)
      if (i == id) return nd;
    assert(false);
    return nodes_.front().second;
  }
  Node& node(int id) {
    for (auto& [i, nd] : nodes_)
      if (i == id) return nd;
    assert(false);
    return nodes_.front().second;
  }

  int head_ = kNull;
  int next_id_;
  std::vector<std::pair<int, Node>> nodes_;    // allocation order; never freed
  std::vector<std::pair<int, Frame>> frames_;  // sorted by thread
  History emitted_;
};

}  // namespace

MachinePtr treiber_stack(int first_node_id) {
  return std::make_shared<TreiberMachine>(first_node_id);
}

}  // namespace linref

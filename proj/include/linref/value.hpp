#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linref {

/// A value exchanged with an object or stored in a client variable.
///
/// Three kinds: an integer, the reserved `empty` returned by pop on an
/// empty stack, and `unit` (the return of push, also the placeholder
/// argument of zero-argument operations). `empty` and `unit` are never
/// pushed and never live inside an abstract stack state.
///
/// Ordering is total (integers by value, then empty, then unit) so values
/// can key ordered sets and make trace comparison deterministic.
class Value {
 public:
  enum class Kind : std::uint8_t { Int = 0, Empty = 1, Unit = 2 };

  constexpr Value() : kind_(Kind::Unit), n_(0) {}

  static constexpr Value integer(std::int64_t n) { return Value(Kind::Int, n); }
  static constexpr Value empty() { return Value(Kind::Empty, 0); }
  static constexpr Value unit() { return Value(Kind::Unit, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_int() const { return kind_ == Kind::Int; }
  constexpr bool is_empty() const { return kind_ == Kind::Empty; }
  constexpr bool is_unit() const { return kind_ == Kind::Unit; }

  constexpr std::int64_t as_int() const {
    if (!is_int()) throw std::logic_error("Value::as_int on non-integer value");
    return n_;
  }

  friend constexpr auto operator<=>(const Value&, const Value&) = default;

  std::string to_string() const {
    switch (kind_) {
      case Kind::Empty: return "empty";
      case Kind::Unit: return "unit";
      default: return std::to_string(n_);
    }
  }

 private:
  constexpr Value(Kind kind, std::int64_t n) : kind_(kind), n_(n) {}

  Kind kind_;
  std::int64_t n_;
};

/// Snapshot of the client's shared variables, in declaration order.
using Valuation = std::vector<Value>;

}  // namespace linref

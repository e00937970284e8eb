#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linref/value.hpp"

namespace linref {

struct ProgramParseError : std::runtime_error {
  int line;
  int column;
  ProgramParseError(int line, int column, const std::string& msg)
      : std::runtime_error("program parse error (line " + std::to_string(line) + ", col " +
                           std::to_string(column) + "): " + msg),
        line(line),
        column(column) {}
};

/// One atomic client step: either an assignment of a constant or
/// variable to a variable, or a call on the single shared object s with
/// an optional result binding. This is the whole statement language —
/// no expressions, branches or loops — so programs are finite state by
/// construction.
struct Statement {
  enum class Kind { Assign, Call };

  Kind kind = Kind::Assign;
  std::string label;   // unique within its thread, e.g. "T3"
  std::string target;  // assignment/result variable; empty on a call discards the result
  bool from_const = false;  // assign: constant or variable source?
  Value constant;           // assign constant source, or the call argument
  std::string source;       // assign variable source
  std::string op;           // call operation name

  static Statement assign(std::string target, Value constant);
  static Statement assign(std::string target, std::string source);
  static Statement call(std::string op, Value arg, std::string target = "");

  bool operator==(const Statement&) const = default;
};

struct ClientThread {
  int id = 0;
  std::vector<Statement> body;
  bool operator==(const ClientThread&) const = default;
};

/// Threads of atomic statements over shared variables (init-declared,
/// observable) and thread-local registers (introduced by first
/// assignment inside a thread, unobservable). Locals of one thread never
/// appear in another thread's statements; shared variables may be read
/// and written by any thread.
struct ClientProgram {
  std::vector<std::pair<std::string, Value>> shared;  // declaration order, initial values
  std::vector<ClientThread> threads;                  // declaration order

  bool is_shared(std::string_view name) const;
  /// Thread-locals in order of first assignment.
  std::vector<std::string> locals(int thread) const;

  bool operator==(const ClientProgram&) const = default;
};

/// Init x,y,z = 0. Thread 1: T1 s.push(1); T2 s.push(2); T3 x := s.pop().
/// Thread 2: U1 y := s.pop(); U2 z := x. Thread 2 reads x, so the
/// threads are data dependent.
ClientProgram program_example1();

/// Init x,y,z = 0. Thread 1: T1 s.push(1); T2 s.push(2);
/// T3 out1 := s.pop(); T4 x := out1. Thread 2: U1 z := 1;
/// U2 out2 := s.pop(); U3 y := out2. No shared variable is read or
/// written by both threads (data independent); results flow through the
/// locals out1/out2.
ClientProgram program_sc2();

/// Parses the program DSL:
///
///   init x=0, y=0, z=0;
///   thread 1 { s.push(1); s.push(2); out1 := s.pop(); x := out1; }
///   thread 2 { z := 1; out2 := s.pop(); y := out2; }
///
/// Statement labels are auto-assigned in order (thread order T, U, V, …
/// numbered from 1). Throws ProgramParseError with line/column on syntax
/// errors, use of undeclared variables, unknown operations, duplicate
/// names and misplaced input.
ClientProgram parse_program(const std::string& text);

/// Canonical DSL rendering; parse_program(render_program(p)) == p for
/// programs whose labels follow the auto-assignment scheme.
std::string render_program(const ClientProgram& p);

/// Sorted distinct push arguments occurring in p — the value domain a
/// most-general object needs to cover.
std::vector<Value> push_literals(const ClientProgram& p);

}  // namespace linref

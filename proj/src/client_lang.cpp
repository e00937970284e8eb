#include "linref/client_lang.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <map>

namespace linref {

Statement Statement::assign(std::string target, Value constant) {
  Statement s;
  s.kind = Kind::Assign;
  s.target = std::move(target);
  s.from_const = true;
  s.constant = constant;
  return s;
}

Statement Statement::assign(std::string target, std::string source) {
  Statement s;
  s.kind = Kind::Assign;
  s.target = std::move(target);
  s.source = std::move(source);
  return s;
}

Statement Statement::call(std::string op, Value arg, std::string target) {
  Statement s;
  s.kind = Kind::Call;
  s.op = std::move(op);
  s.constant = arg;
  s.target = std::move(target);
  return s;
}

bool ClientProgram::is_shared(std::string_view name) const {
  for (const auto& [n, v] : shared)
    if (n == name) return true;
  return false;
}

std::vector<std::string> ClientProgram::locals(int thread) const {
  std::vector<std::string> out;
  for (const ClientThread& th : threads) {
    if (th.id != thread) continue;
    for (const Statement& st : th.body) {
      if (st.target.empty() || is_shared(st.target)) continue;
      if (std::find(out.begin(), out.end(), st.target) == out.end()) out.push_back(st.target);
    }
  }
  return out;
}

namespace {

std::string label_prefix(std::size_t thread_index) {
  if (thread_index < 7) return std::string(1, static_cast<char>('T' + thread_index));
  return "T" + std::to_string(thread_index + 1) + "_";
}

void assign_labels(ClientProgram& p) {
  for (std::size_t ti = 0; ti < p.threads.size(); ++ti)
    for (std::size_t i = 0; i < p.threads[ti].body.size(); ++i)
      p.threads[ti].body[i].label = label_prefix(ti) + std::to_string(i + 1);
}

struct Token {
  enum class Type { Ident, Int, Sym, End };
  Type type = Type::End;
  std::string text;
  long long num = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(c);
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Token::Type::Ident;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        t.text += text[i];
        bump(text[i]);
        ++i;
      }
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      t.type = Token::Type::Int;
      if (c == '-') {
        t.text += c;
        bump(c);
        ++i;
      }
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        t.text += text[i];
        bump(text[i]);
        ++i;
      }
      errno = 0;
      t.num = std::strtoll(t.text.c_str(), nullptr, 10);
      if (errno == ERANGE) throw ProgramParseError(t.line, t.col, "integer out of range");
    } else if (c == ':') {
      if (i + 1 >= text.size() || text[i + 1] != '=')
        throw ProgramParseError(line, col, "expected ':='");
      t.type = Token::Type::Sym;
      t.text = ":=";
      bump(':');
      bump('=');
      i += 2;
    } else if (c == '=' || c == ',' || c == ';' || c == '{' || c == '}' || c == '(' ||
               c == ')' || c == '.') {
      t.type = Token::Type::Sym;
      t.text = std::string(1, c);
      bump(c);
      ++i;
    } else {
      throw ProgramParseError(line, col, "unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ClientProgram parse() {
    ClientProgram p;
    if (!at_ident("init")) fail(peek(), "expected 'init'");
    next();
    while (true) {
      const Token& name = expect_ident("variable name");
      check_not_object(name);
      if (p.is_shared(name.text)) fail(name, "duplicate variable '" + name.text + "'");
      expect_sym("=");
      const Token& num = expect_int();
      p.shared.emplace_back(name.text, Value::integer(num.num));
      if (at_sym(",")) {
        next();
        continue;
      }
      break;
    }
    expect_sym(";");
    while (peek().type != Token::Type::End) {
      if (!at_ident("thread")) fail(peek(), "expected 'thread'");
      next();
      const Token& id_tok = expect_int();
      int id = static_cast<int>(id_tok.num);
      for (const ClientThread& th : p.threads)
        if (th.id == id) fail(id_tok, "duplicate thread " + std::to_string(id));
      expect_sym("{");
      ClientThread th;
      th.id = id;
      std::vector<std::string> locals;
      while (!at_sym("}")) th.body.push_back(statement(p, id, locals));
      next();  // '}'
      p.threads.push_back(std::move(th));
    }
    assign_labels(p);
    return p;
  }

 private:
  Statement statement(const ClientProgram& p, int thread, std::vector<std::string>& locals) {
    Statement st;
    const Token& first = expect_ident("statement");
    if (first.text == "s" && at_sym(".")) {
      st = call_rhs();  // bare call, result discarded
    } else {
      check_not_object(first);
      expect_sym(":=");
      const Token& rhs = peek();
      if (rhs.type == Token::Type::Int) {
        next();
        st = Statement::assign(first.text, Value::integer(rhs.num));
      } else if (rhs.type == Token::Type::Ident && rhs.text == "s") {
        next();
        st = call_rhs();
        st.target = first.text;
      } else if (rhs.type == Token::Type::Ident) {
        next();
        if (!p.is_shared(rhs.text) &&
            std::find(locals.begin(), locals.end(), rhs.text) == locals.end())
          fail(rhs, "use of undeclared variable '" + rhs.text + "'");
        st = Statement::assign(first.text, rhs.text);
      } else {
        fail(rhs, "expected a constant, variable, or call");
      }
      introduce(p, thread, first, locals);
    }
    expect_sym(";");
    return st;
  }

  // Parses ".op(arg?)" after the object name.
  Statement call_rhs() {
    expect_sym(".");
    const Token& op = expect_ident("operation name");
    expect_sym("(");
    Statement st;
    if (op.text == "push") {
      if (peek().type != Token::Type::Int) fail(peek(), "push takes one integer argument");
      st = Statement::call("push", Value::integer(next().num));
    } else if (op.text == "pop") {
      if (!at_sym(")")) fail(peek(), "pop takes no argument");
      st = Statement::call("pop", Value::unit());
    } else {
      fail(op, "call to unknown operation '" + op.text + "'");
    }
    expect_sym(")");
    return st;
  }

  void introduce(const ClientProgram& p, int thread, const Token& name,
                 std::vector<std::string>& locals) {
    if (p.is_shared(name.text)) return;
    auto it = local_owner_.find(name.text);
    if (it != local_owner_.end() && it->second != thread)
      fail(name, "variable '" + name.text + "' is local to thread " + std::to_string(it->second));
    local_owner_.emplace(name.text, thread);
    if (std::find(locals.begin(), locals.end(), name.text) == locals.end())
      locals.push_back(name.text);
  }

  void check_not_object(const Token& t) {
    if (t.text == "s") fail(t, "the object name 's' cannot be a variable");
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_ident(std::string_view text) const {
    return peek().type == Token::Type::Ident && peek().text == text;
  }
  bool at_sym(std::string_view text) const {
    return peek().type == Token::Type::Sym && peek().text == text;
  }
  const Token& expect_ident(const char* what) {
    if (peek().type != Token::Type::Ident) fail(peek(), std::string("expected ") + what);
    return next();
  }
  const Token& expect_int() {
    if (peek().type != Token::Type::Int) fail(peek(), "expected an integer");
    return next();
  }
  void expect_sym(std::string_view text) {
    if (!at_sym(text)) fail(peek(), "expected '" + std::string(text) + "'");
    next();
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ProgramParseError(t.line, t.col, msg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, int> local_owner_;
};

std::string statement_text(const Statement& st) {
  if (st.kind == Statement::Kind::Assign)
    return st.target + " := " + (st.from_const ? st.constant.to_string() : st.source);
  std::string out = st.target.empty() ? "" : st.target + " := ";
  out += "s." + st.op + "(";
  if (!st.constant.is_unit()) out += st.constant.to_string();
  return out + ")";
}

}  // namespace

ClientProgram program_example1() {
  ClientProgram p;
  p.shared = {{"x", Value::integer(0)}, {"y", Value::integer(0)}, {"z", Value::integer(0)}};
  p.threads.push_back({1,
                       {Statement::call("push", Value::integer(1)),
                        Statement::call("push", Value::integer(2)),
                        Statement::call("pop", Value::unit(), "x")}});
  p.threads.push_back({2,
                       {Statement::call("pop", Value::unit(), "y"),
                        Statement::assign("z", std::string("x"))}});
  assign_labels(p);
  return p;
}

ClientProgram program_sc2() {
  ClientProgram p;
  p.shared = {{"x", Value::integer(0)}, {"y", Value::integer(0)}, {"z", Value::integer(0)}};
  p.threads.push_back({1,
                       {Statement::call("push", Value::integer(1)),
                        Statement::call("push", Value::integer(2)),
                        Statement::call("pop", Value::unit(), "out1"),
                        Statement::assign("x", std::string("out1"))}});
  p.threads.push_back({2,
                       {Statement::assign("z", Value::integer(1)),
                        Statement::call("pop", Value::unit(), "out2"),
                        Statement::assign("y", std::string("out2"))}});
  assign_labels(p);
  return p;
}

ClientProgram parse_program(const std::string& text) { return Parser(text).parse(); }

std::string render_program(const ClientProgram& p) {
  std::string out = "init ";
  for (std::size_t i = 0; i < p.shared.size(); ++i) {
    if (i) out += ", ";
    out += p.shared[i].first + "=" + p.shared[i].second.to_string();
  }
  out += ";\n";
  for (const ClientThread& th : p.threads) {
    out += "thread " + std::to_string(th.id) + " {";
    for (const Statement& st : th.body) out += " " + statement_text(st) + ";";
    out += " }\n";
  }
  return out;
}

std::vector<Value> push_literals(const ClientProgram& p) {
  std::vector<Value> out;
  for (const ClientThread& th : p.threads)
    for (const Statement& st : th.body)
      if (st.kind == Statement::Kind::Call && st.op == "push") out.push_back(st.constant);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace linref

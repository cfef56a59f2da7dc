#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nrc/expr.hpp"
#include "nrc/pattern.hpp"

namespace nrc {

namespace detail {

struct Token {
  enum Kind { Ident, Int, Str, Sym, End } kind;
  std::string text;
  int line;
  int column;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      advance(j - i);
      out.push_back({text == "_" ? Token::Sym : Token::Ident, text, l, cl});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Int, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance(1);
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\\' && i + 1 < src.size()) advance(1);
        text += src[i];
        advance(1);
      }
      if (i >= src.size()) throw Error(ErrorCode::ParseError, "unterminated string", l, cl);
      advance(1);
      out.push_back({Token::Str, text, l, cl});
      continue;
    }
    static const char* two[] = {"<=", ">=", "!="};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Token::Sym, t, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("{}[]<>(),.:;=+-*/").find(c) != std::string_view::npos) {
      out.push_back({Token::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw Error(ErrorCode::ParseError, std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {"let", "in", "if", "then", "else", "for", "where", "return", "union",
                                                       "sum", "empty", "not", "and", "or", "true", "false"};
  return k;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Expr query() {
    if (peek().kind == Token::End) fail("empty query");
    Expr e = expr(0);
    expect_end();
    return e;
  }

  Pattern pattern_only() {
    if (peek().kind == Token::End) fail("empty pattern");
    Pattern p = pattern();
    expect_end();
    return p;
  }

  Type type_only() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  // ---- tokens
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Sym && peek(k).text == s; }
  bool is_kw(const char* s) const { return peek().kind == Token::Ident && peek().text == s; }
  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }
  bool accept_kw(const char* s) {
    if (!is_kw(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw Error(ErrorCode::ParseError, msg + (t.kind == Token::End ? " at end of input" : " near '" + t.text + "'"),
                t.line, t.column);
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_kw(const char* s) {
    if (!accept_kw(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_end() {
    if (peek().kind != Token::End) fail("unexpected trailing input");
  }
  std::string identifier(const char* what) {
    if (peek().kind != Token::Ident || keywords().count(peek().text)) fail(std::string("expected ") + what);
    return next().text;
  }
  std::string field_name() {
    if (peek().kind != Token::Ident) fail("expected a field name");
    return next().text;
  }
  std::int64_t integer(bool negative) {
    const std::string& digits = next().text;
    try {
      if (negative) {
        if (digits == "9223372036854775808") return INT64_MIN;
        return -static_cast<std::int64_t>(std::stoll(digits));
      }
      return std::stoll(digits);
    } catch (const std::out_of_range&) {
      fail("integer literal out of range");
    }
  }

  // ---- expressions
  // Inside record literals '>' closes the record, so comparisons with '>'
  // must be parenthesised there.
  bool no_gt_ = false;

  struct Guard {
    bool& flag;
    bool saved;
    Guard(bool& f, bool v) : flag(f), saved(f) { flag = v; }
    ~Guard() { flag = saved; }
  };

  static int binary_prec(const Token& t, PrimOp& op) {
    if (t.kind == Token::Ident) {
      if (t.text == "or") return op = PrimOp::Or, 1;
      if (t.text == "and") return op = PrimOp::And, 2;
      return -1;
    }
    if (t.kind != Token::Sym) return -1;
    const std::string& s = t.text;
    if (s == "=") return op = PrimOp::Eq, 3;
    if (s == "!=") return op = PrimOp::Neq, 3;
    if (s == "<") return op = PrimOp::Lt, 3;
    if (s == "<=") return op = PrimOp::Le, 3;
    if (s == ">") return op = PrimOp::Gt, 3;
    if (s == ">=") return op = PrimOp::Ge, 3;
    if (s == "+") return op = PrimOp::Add, 4;
    if (s == "-") return op = PrimOp::Sub, 4;
    if (s == "*") return op = PrimOp::Mul, 5;
    if (s == "/") return op = PrimOp::Div, 5;
    return -1;
  }

  Expr expr(int min_prec) {
    Expr lhs = prefix();
    while (true) {
      PrimOp op;
      int prec = binary_prec(peek(), op);
      if (prec < 0 || prec < min_prec) break;
      if (no_gt_ && (op == PrimOp::Gt || op == PrimOp::Ge)) break;
      next();
      Expr rhs = expr(prec + 1);
      lhs = ex::prim(op, {lhs, rhs});
    }
    return lhs;
  }

  Expr prefix() {
    if (accept_kw("let")) {
      std::string x = identifier("a variable");
      expect_sym("=");
      Expr bound = expr(0);
      expect_kw("in");
      return ex::let(std::move(x), bound, expr(0));
    }
    if (accept_kw("if")) {
      Expr c = expr(0);
      expect_kw("then");
      Expr t = expr(0);
      expect_kw("else");
      return ex::if_(c, t, expr(0));
    }
    if (accept_kw("for")) return comprehension();
    if (accept_kw("not")) return ex::prim(PrimOp::Not, {prefix()});
    if (accept_kw("sum")) return ex::sum(prefix());
    if (accept_kw("empty")) return ex::is_empty(prefix());
    if (is_sym("-")) {
      next();
      if (peek().kind == Token::Int) return postfix(ex::integer(integer(true)));
      return ex::prim(PrimOp::Neg, {prefix()});
    }
    return postfix(primary());
  }

  Expr comprehension() {
    std::vector<std::pair<std::string, Expr>> binders;
    do {
      std::string x = identifier("a variable");
      expect_kw("in");
      binders.emplace_back(std::move(x), expr(0));
    } while (accept_sym(","));
    std::vector<Expr> conds;
    if (accept_kw("where")) {
      do conds.push_back(expr(0));
      while (accept_sym(","));
    }
    expect_kw("return");
    Expr body = expr(0);
    for (auto it = conds.rbegin(); it != conds.rend(); ++it) body = ex::if_(*it, body, ex::empty());
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = ex::comp(body, it->first, it->second);
    return body;
  }

  Expr postfix(Expr e) {
    while (is_sym(".")) {
      next();
      e = ex::field(e, field_name());
    }
    return e;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Token::Int) return ex::integer(integer(false));
    if (accept_kw("true")) return ex::boolean(true);
    if (accept_kw("false")) return ex::boolean(false);
    if (accept_sym("_")) return ex::hole();
    if (accept_sym("(")) {
      Guard g(no_gt_, false);
      Expr e = expr(0);
      expect_sym(")");
      return e;
    }
    if (accept_kw("union")) {
      Guard g(no_gt_, false);
      expect_sym("{");
      Expr a = expr(0);
      expect_sym(",");
      Expr b = expr(0);
      expect_sym("}");
      return ex::union_(a, b);
    }
    if (accept_sym("{")) {
      if (accept_sym("}")) {
        if (accept_sym(":")) {
          Type ty = type();
          if (ty.kind() != Type::Kind::Set) fail("empty collection annotation must be a collection type");
          return ex::empty(ty.element());
        }
        return ex::empty();
      }
      Guard g(no_gt_, false);
      Expr e = expr(0);
      expect_sym("}");
      return ex::singleton(e);
    }
    if (accept_sym("<")) {
      std::vector<std::pair<std::string, Expr>> fields;
      std::set<std::string> seen;
      if (!accept_sym(">")) {
        do {
          const Token& at = peek();
          std::string f = field_name();
          if (!seen.insert(f).second) throw Error(ErrorCode::ParseError, "duplicate field " + f, at.line, at.column);
          expect_sym(":");
          Guard g(no_gt_, true);
          fields.emplace_back(f, expr(0));
        } while (accept_sym(","));
        expect_sym(">");
      }
      return ex::record(std::move(fields));
    }
    if (t.kind == Token::Ident && !keywords().count(t.text)) return ex::var(next().text);
    fail("expected an expression");
  }

  // ---- types
  Type type() {
    if (accept_kw("int")) return Type::integer();
    if (accept_kw("bool")) return Type::boolean();
    if (accept_sym("{")) {
      Type t = type();
      expect_sym("}");
      return Type::set(t);
    }
    if (accept_sym("<")) {
      std::map<std::string, Type> fs;
      if (!accept_sym(">")) {
        do {
          const Token& at = peek();
          std::string f = field_name();
          expect_sym(":");
          if (!fs.emplace(f, type()).second) throw Error(ErrorCode::ParseError, "duplicate field " + f, at.line, at.column);
        } while (accept_sym(","));
        expect_sym(">");
      }
      return Type::record(std::move(fs));
    }
    fail("expected a type");
  }

  // ---- labels and patterns
  Atom atom() {
    const Token& t = next();
    if (t.kind == Token::Int) return parse_atom(t.text);
    if (t.kind == Token::Ident || t.kind == Token::Str) {
      if (t.kind == Token::Str && all_digits(t.text)) return parse_atom(t.text);
      if (!is_atom_text(t.text)) throw Error(ErrorCode::ParseError, "bad label atom", t.line, t.column);
      return sym(t.text);
    }
    throw Error(ErrorCode::ParseError, "expected a label atom", t.line, t.column);
  }

  Label label() {
    expect_sym("[");
    std::vector<Atom> atoms;
    if (!accept_sym("]")) {
      do atoms.push_back(atom());
      while (accept_sym(","));
      expect_sym("]");
    }
    return Label(std::move(atoms));
  }

  Tail tail_marker() {
    if (accept_sym("_")) return Tail::Hole;
    if (accept_sym("*")) return Tail::Diamond;
    fail("expected '_' or '*'");
  }

  Pattern pattern() {
    if (accept_sym("_")) return Pattern::hole();
    if (accept_sym("*")) return Pattern::diamond();
    if (accept_kw("true")) return Pattern::constant(bool_const(true));
    if (accept_kw("false")) return Pattern::constant(bool_const(false));
    if (is_sym("-") && peek(1).kind == Token::Int) {
      next();
      return Pattern::constant(int_const(integer(true)));
    }
    if (peek().kind == Token::Int) return Pattern::constant(int_const(integer(false)));
    if (accept_sym("<")) {
      FieldPatterns fs;
      Tail tail = Tail::Closed;
      if (accept_sym(";")) {
        tail = tail_marker();
      } else if (!is_sym(">")) {
        do {
          const Token& at = peek();
          std::string f = field_name();
          expect_sym(":");
          if (!fs.emplace(f, pattern()).second)
            throw Error(ErrorCode::ParseError, "duplicate field " + f, at.line, at.column);
        } while (accept_sym(","));
        if (accept_sym(";")) tail = tail_marker();
      }
      expect_sym(">");
      return Pattern::record(std::move(fs), tail);
    }
    if (accept_sym("{")) {
      ElementPatterns es;
      const Token& start = peek();
      if (!accept_sym("}")) {
        do {
          const Token& at = peek();
          Label l = label();
          expect_sym(".");
          if (!es.emplace(l, pattern()).second)
            throw Error(ErrorCode::ParseError, "duplicate label " + to_string(l), at.line, at.column);
        } while (accept_sym(","));
        expect_sym("}");
      }
      Tail tail = Tail::Closed;
      if (is_kw("U")) {
        next();
        tail = tail_marker();
      }
      try {
        return Pattern::set(std::move(es), tail);
      } catch (const Error& e) {
        throw Error(e.code(), e.detail(), start.line, start.column);
      }
    }
    fail("expected a pattern");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline Value pattern_to_value(const Pattern& p) {
  switch (p.kind()) {
    case Pattern::Kind::Constant: return Value::constant(p.as_constant());
    case Pattern::Kind::Record: {
      if (p.tail() != Tail::Closed) break;
      Fields fs;
      for (const auto& [k, q] : p.fields()) fs.emplace_hint(fs.end(), k, pattern_to_value(q));
      return Value::record(std::move(fs));
    }
    case Pattern::Kind::Set: {
      if (p.tail() != Tail::Closed) break;
      Elements es;
      for (const auto& [l, q] : p.elements()) es.emplace_hint(es.end(), l, pattern_to_value(q));
      return Value::collection(std::move(es));
    }
    default: break;
  }
  throw Error(ErrorCode::ParseError, "a value cannot contain holes, diamonds or open tails", 1, 1);
}

}  // namespace detail

inline Expr parse_query(std::string_view text) { return detail::Parser(text).query(); }
inline Pattern parse_pattern(std::string_view text) { return detail::Parser(text).pattern_only(); }
inline Type parse_type(std::string_view text) { return detail::Parser(text).type_only(); }
// Values use the pattern syntax without holes, diamonds or open tails.
inline Value parse_value(std::string_view text) { return detail::pattern_to_value(parse_pattern(text)); }

}  // namespace nrc

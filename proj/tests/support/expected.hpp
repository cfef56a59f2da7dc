#pragma once

#include "nrc/parse.hpp"
#include "nrc/trace.hpp"
#include "nrc/workloads.hpp"

// Hand-built traces and slices for the example queries, used as oracles.
namespace nrc::expected {

using workloads::lab;

inline Trace var(const char* x) { return tr::make(tr::Var{x}); }
inline Trace field(Trace r, const char* f) { return tr::make(tr::Field{std::move(r), f}); }
inline Trace num(std::int64_t n) { return tr::make(tr::Const{int_const(n)}); }
inline Trace eq(Trace a, Trace b) { return tr::make(tr::Prim{PrimOp::Eq, {std::move(a), std::move(b)}}); }
inline Trace sng(Trace t) { return tr::make(tr::Singleton{std::move(t)}); }
inline Trace rec(std::vector<std::pair<std::string, Trace>> fs) { return tr::make(tr::Record{std::move(fs)}); }
inline Trace nothing() { return tr::make(tr::Empty{std::nullopt}); }

inline const ex::If& if_parts(const Expr& e) { return std::get<ex::If>(e.node().data); }
inline const ex::Comp& comp_parts(const Expr& e) { return std::get<ex::Comp>(e.node().data); }

// Trace of the running query on R: r1 fails the test, r2 and r3 pass.
struct Running {
  Expr query = parse_query(workloads::running_query);
  Expr body = comp_parts(query).body;
  const ex::If& cond = if_parts(body);

  Trace test() const { return eq(field(var("x"), "B"), num(3)); }
  Trace branch(bool taken, Trace t) const {
    return tr::make(tr::If{test(), cond.then_branch, cond.else_branch, taken, std::move(t)});
  }
  Trace kept(Trace a, Trace b) const { return branch(true, sng(rec({{"A", std::move(a)}, {"B", std::move(b)}}))); }
  Trace loop(TraceSet elements) const { return tr::make(tr::Comp{body, "x", var("R"), std::move(elements)}); }

  Trace full() const {
    return loop({{lab({"r1"}), branch(false, nothing())},
                 {lab({"r2"}), kept(field(var("x"), "A"), field(var("x"), "C"))},
                 {lab({"r3"}), kept(field(var("x"), "A"), field(var("x"), "C"))}});
  }

  // The slice as displayed for the simple pattern {[r2].<A:_,B:8>,[r3]._}.
  Trace displayed_simple_slice() const {
    return loop({{lab({"r1"}), tr::hole()}, {lab({"r2"}), kept(tr::hole(), field(var("x"), "C"))}, {lab({"r3"}), tr::hole()}});
  }

  // What the slicing rules produce for the same pattern: the closed pattern
  // still needs r1 to produce nothing and r3 to produce one element.
  Trace simple_slice() const {
    return loop({{lab({"r1"}), branch(false, nothing())},
                 {lab({"r2"}), kept(tr::hole(), field(var("x"), "C"))},
                 {lab({"r3"}), branch(true, sng(tr::hole()))}});
  }

  Trace enriched_slice() const { return loop({{lab({"r2"}), kept(tr::hole(), field(var("x"), "C"))}}); }
};

// Slice of the join query for {[r1,s1].<A:1;_>,[r2,s2].<B:4;_>} U _.
struct Join {
  Expr query = parse_query(workloads::join_query);
  Expr outer_body = comp_parts(query).body;
  Expr inner_body = comp_parts(outer_body).body;
  const ex::If& cond = if_parts(inner_body);

  Trace kept(Trace a, Trace b) const {
    Trace test = eq(field(var("x"), "B"), field(var("y"), "B"));
    return tr::make(tr::If{test, cond.then_branch, cond.else_branch, true, sng(rec({{"A", std::move(a)}, {"B", std::move(b)}}))});
  }
  Trace inner(const char* s, Trace t) const {
    return tr::make(tr::Comp{inner_body, "y", var("S"), {{lab({s}), std::move(t)}}});
  }
  Trace slice() const {
    return tr::make(tr::Comp{outer_body, "x", var("R"),
                             {{lab({"r1"}), inner("s1", kept(field(var("x"), "A"), tr::hole()))},
                              {lab({"r2"}), inner("s2", kept(tr::hole(), field(var("y"), "C")))}}});
  }
};

}  // namespace nrc::expected

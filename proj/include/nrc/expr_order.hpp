#pragma once

#include "nrc/expr.hpp"

namespace nrc {

namespace detail {

[[noreturn]] inline void incompatible_exprs(const char* why) {
  throw Error(ErrorCode::Incompatible, std::string("expressions differ: ") + why);
}

}  // namespace detail

// Least upper bound of two partial versions of one expression; a hole is
// below everything.
inline Expr lub_expr(const Expr& a, const Expr& b) {
  if (a.get() == b.get() || b.is_hole()) return a;
  if (a.is_hole()) return b;
  const auto& da = a.node().data;
  const auto& db = b.node().data;
  if (da.index() != db.index()) detail::incompatible_exprs("constructor");
  return std::visit(
      detail::overloaded{
          [&](const ex::Const& x) {
            if (!(x == std::get<ex::Const>(db))) detail::incompatible_exprs("constant");
            return a;
          },
          [&](const ex::Prim& x) {
            const auto& y = std::get<ex::Prim>(db);
            if (x.op != y.op || x.args.size() != y.args.size()) detail::incompatible_exprs("operator");
            std::vector<Expr> args;
            for (std::size_t i = 0; i < x.args.size(); ++i) args.push_back(lub_expr(x.args[i], y.args[i]));
            return ex::prim(x.op, std::move(args));
          },
          [&](const ex::Var& x) {
            if (!(x == std::get<ex::Var>(db))) detail::incompatible_exprs("variable");
            return a;
          },
          [&](const ex::Let& x) {
            const auto& y = std::get<ex::Let>(db);
            if (x.var != y.var) detail::incompatible_exprs("let variable");
            return ex::let(x.var, lub_expr(x.bound, y.bound), lub_expr(x.body, y.body));
          },
          [&](const ex::Record& x) {
            const auto& y = std::get<ex::Record>(db);
            if (x.fields.size() != y.fields.size()) detail::incompatible_exprs("record fields");
            std::vector<std::pair<std::string, Expr>> fs;
            for (std::size_t i = 0; i < x.fields.size(); ++i) {
              if (x.fields[i].first != y.fields[i].first) detail::incompatible_exprs("record fields");
              fs.emplace_back(x.fields[i].first, lub_expr(x.fields[i].second, y.fields[i].second));
            }
            return ex::record(std::move(fs));
          },
          [&](const ex::Field& x) {
            const auto& y = std::get<ex::Field>(db);
            if (x.field != y.field) detail::incompatible_exprs("projected field");
            return ex::field(lub_expr(x.record, y.record), x.field);
          },
          [&](const ex::If& x) {
            const auto& y = std::get<ex::If>(db);
            return ex::if_(lub_expr(x.test, y.test), lub_expr(x.then_branch, y.then_branch),
                           lub_expr(x.else_branch, y.else_branch));
          },
          [&](const ex::Empty& x) {
            if (!(x == std::get<ex::Empty>(db))) detail::incompatible_exprs("empty annotation");
            return a;
          },
          [&](const ex::Singleton& x) { return ex::singleton(lub_expr(x.element, std::get<ex::Singleton>(db).element)); },
          [&](const ex::Union& x) {
            const auto& y = std::get<ex::Union>(db);
            return ex::union_(lub_expr(x.left, y.left), lub_expr(x.right, y.right));
          },
          [&](const ex::Comp& x) {
            const auto& y = std::get<ex::Comp>(db);
            if (x.var != y.var) detail::incompatible_exprs("bound variable");
            return ex::comp(lub_expr(x.body, y.body), x.var, lub_expr(x.source, y.source));
          },
          [&](const ex::Sum& x) { return ex::sum(lub_expr(x.arg, std::get<ex::Sum>(db).arg)); },
          [&](const ex::IsEmpty& x) { return ex::is_empty(lub_expr(x.arg, std::get<ex::IsEmpty>(db).arg)); },
          [&](const ex::Hole&) { return b; },
      },
      da);
}

// a is b with some subexpressions replaced by holes.
inline bool expr_leq(const Expr& a, const Expr& b) {
  if (a.get() == b.get() || a.is_hole()) return true;
  const auto& da = a.node().data;
  const auto& db = b.node().data;
  if (da.index() != db.index()) return false;
  return std::visit(
      detail::overloaded{
          [&](const ex::Const& x) { return x == std::get<ex::Const>(db); },
          [&](const ex::Prim& x) {
            const auto& y = std::get<ex::Prim>(db);
            if (x.op != y.op || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i)
              if (!expr_leq(x.args[i], y.args[i])) return false;
            return true;
          },
          [&](const ex::Var& x) { return x == std::get<ex::Var>(db); },
          [&](const ex::Let& x) {
            const auto& y = std::get<ex::Let>(db);
            return x.var == y.var && expr_leq(x.bound, y.bound) && expr_leq(x.body, y.body);
          },
          [&](const ex::Record& x) {
            const auto& y = std::get<ex::Record>(db);
            if (x.fields.size() != y.fields.size()) return false;
            for (std::size_t i = 0; i < x.fields.size(); ++i)
              if (x.fields[i].first != y.fields[i].first || !expr_leq(x.fields[i].second, y.fields[i].second))
                return false;
            return true;
          },
          [&](const ex::Field& x) {
            const auto& y = std::get<ex::Field>(db);
            return x.field == y.field && expr_leq(x.record, y.record);
          },
          [&](const ex::If& x) {
            const auto& y = std::get<ex::If>(db);
            return expr_leq(x.test, y.test) && expr_leq(x.then_branch, y.then_branch) &&
                   expr_leq(x.else_branch, y.else_branch);
          },
          [&](const ex::Empty& x) { return x == std::get<ex::Empty>(db); },
          [&](const ex::Singleton& x) { return expr_leq(x.element, std::get<ex::Singleton>(db).element); },
          [&](const ex::Union& x) {
            const auto& y = std::get<ex::Union>(db);
            return expr_leq(x.left, y.left) && expr_leq(x.right, y.right);
          },
          [&](const ex::Comp& x) {
            const auto& y = std::get<ex::Comp>(db);
            return x.var == y.var && expr_leq(x.body, y.body) && expr_leq(x.source, y.source);
          },
          [&](const ex::Sum& x) { return expr_leq(x.arg, std::get<ex::Sum>(db).arg); },
          [&](const ex::IsEmpty& x) { return expr_leq(x.arg, std::get<ex::IsEmpty>(db).arg); },
          [&](const ex::Hole&) { return true; },
      },
      da);
}

}  // namespace nrc

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "nrc/parse.hpp"
#include "nrc/print.hpp"
#include "nrc/trace.hpp"

namespace nrc {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_format(const std::string& msg) { throw Error(ErrorCode::FormatError, msg); }

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_format(std::string("missing member \"") + key + "\"");
  return j.at(key);
}

inline std::string str(const Json& j, const char* what) {
  if (!j.is_string()) bad_format(std::string(what) + " must be a string");
  return j.get<std::string>();
}

// Objects with exactly one member act as tagged variants.
inline std::pair<std::string, const Json*> tagged(const Json& j, const char* what) {
  if (!j.is_object() || j.size() != 1) bad_format(std::string(what) + " must be an object with one member");
  return {j.begin().key(), &j.begin().value()};
}

}  // namespace detail

inline Json label_to_json(const Label& l) {
  Json a = Json::array();
  for (const auto& atom : l.atoms()) a.push_back(to_string(atom));
  return a;
}

inline Label label_from_json(const Json& j) {
  if (!j.is_array()) detail::bad_format("label must be an array of strings");
  std::vector<Atom> atoms;
  for (const auto& a : j) atoms.push_back(parse_atom(detail::str(a, "label atom")));
  return Label(std::move(atoms));
}

inline Json constant_to_json(const Constant& c) {
  if (c.index() == 0) return Json{{"int", std::get<0>(c)}};
  return Json{{"bool", std::get<1>(c)}};
}

inline Json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return constant_to_json(v.as_constant());
    case Value::Kind::Record: {
      Json fs = Json::object();
      for (const auto& [k, f] : v.fields()) fs[k] = value_to_json(f);
      return Json{{"rec", fs}};
    }
    case Value::Kind::Collection: {
      Json es = Json::array();
      for (const auto& [l, e] : v.elements()) es.push_back(Json{{"label", label_to_json(l)}, {"value", value_to_json(e)}});
      return Json{{"coll", es}};
    }
  }
  return nullptr;
}

inline Value value_from_json(const Json& j) {
  auto [tag, body] = detail::tagged(j, "value");
  if (tag == "int") {
    if (!body->is_number_integer()) detail::bad_format("\"int\" needs an integer");
    return Value::integer(body->get<std::int64_t>());
  }
  if (tag == "bool") {
    if (!body->is_boolean()) detail::bad_format("\"bool\" needs a boolean");
    return Value::boolean(body->get<bool>());
  }
  if (tag == "rec") {
    if (!body->is_object()) detail::bad_format("\"rec\" needs an object");
    Fields fs;
    for (auto it = body->begin(); it != body->end(); ++it)
      if (!fs.emplace(it.key(), value_from_json(it.value())).second) detail::bad_format("duplicate field " + it.key());
    return Value::record(std::move(fs));
  }
  if (tag == "coll") {
    if (!body->is_array()) detail::bad_format("\"coll\" needs an array");
    Elements es;
    for (const auto& e : *body) {
      Label l = label_from_json(detail::member(e, "label"));
      if (!es.emplace(l, value_from_json(detail::member(e, "value"))).second) detail::bad_format("duplicate label " + to_string(l));
    }
    try {
      return Value::collection(std::move(es));
    } catch (const Error& e) {
      detail::bad_format(e.detail());
    }
  }
  detail::bad_format("unknown value tag \"" + tag + "\"");
}

inline Json type_to_json(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Int: return "int";
    case Type::Kind::Bool: return "bool";
    case Type::Kind::Unknown: return nullptr;
    case Type::Kind::Set: return Json{{"set", type_to_json(t.element())}};
    case Type::Kind::Record: {
      Json fs = Json::object();
      for (const auto& [k, f] : t.fields()) fs[k] = type_to_json(f);
      return Json{{"rec", fs}};
    }
  }
  return nullptr;
}

inline Type type_from_json(const Json& j) {
  if (j.is_null()) return Type::unknown();
  if (j.is_string()) {
    if (j == "int") return Type::integer();
    if (j == "bool") return Type::boolean();
    detail::bad_format("unknown type " + j.get<std::string>());
  }
  auto [tag, body] = detail::tagged(j, "type");
  if (tag == "set") return Type::set(type_from_json(*body));
  if (tag == "rec") {
    if (!body->is_object()) detail::bad_format("\"rec\" type needs an object");
    std::map<std::string, Type> fs;
    for (auto it = body->begin(); it != body->end(); ++it) fs.emplace(it.key(), type_from_json(it.value()));
    return Type::record(std::move(fs));
  }
  detail::bad_format("unknown type tag \"" + tag + "\"");
}

namespace detail {

inline std::string op_name(PrimOp op) { return std::string(symbol(op)); }

inline PrimOp op_from_name(const std::string& s) {
  for (PrimOp op : {PrimOp::Add, PrimOp::Sub, PrimOp::Mul, PrimOp::Div, PrimOp::Eq, PrimOp::Neq, PrimOp::Lt, PrimOp::Le,
                    PrimOp::Gt, PrimOp::Ge, PrimOp::And, PrimOp::Or, PrimOp::Not, PrimOp::Neg})
    if (symbol(op) == s) return op;
  bad_format("unknown operator " + s);
}

inline Expr expr_from_json(const Json& j) {
  try {
    return parse_query(str(j, "expression"));
  } catch (const Error& e) {
    bad_format("stored expression: " + e.detail());
  }
}

}  // namespace detail

// Stored expressions are kept as query text.
inline Json trace_to_json(const Trace& t) {
  return std::visit(
      detail::overloaded{
          [](const tr::Const& n) { return Json{{"const", constant_to_json(n.value)}}; },
          [](const tr::Prim& n) {
            Json args = Json::array();
            for (const auto& a : n.args) args.push_back(trace_to_json(a));
            return Json{{"prim", Json{{"op", detail::op_name(n.op)}, {"args", args}}}};
          },
          [](const tr::Var& n) { return Json{{"var", n.name}}; },
          [](const tr::Let& n) {
            return Json{{"let", Json{{"var", n.var}, {"bound", trace_to_json(n.bound)}, {"body", trace_to_json(n.body)}}}};
          },
          [](const tr::Record& n) {
            Json fs = Json::array();
            for (const auto& [k, f] : n.fields) fs.push_back(Json{{"field", k}, {"trace", trace_to_json(f)}});
            return Json{{"rec", fs}};
          },
          [](const tr::Field& n) { return Json{{"proj", Json{{"field", n.field}, {"of", trace_to_json(n.record)}}}}; },
          [](const tr::If& n) {
            return Json{{"if", Json{{"test", trace_to_json(n.test)},
                                    {"then", render_expr(n.then_branch)},
                                    {"else", render_expr(n.else_branch)},
                                    {"taken", n.taken},
                                    {"branch", trace_to_json(n.branch)}}}};
          },
          [](const tr::Empty& n) { return Json{{"empty", n.element ? type_to_json(*n.element) : Json(nullptr)}}; },
          [](const tr::Singleton& n) { return Json{{"sng", trace_to_json(n.element)}}; },
          [](const tr::Union& n) { return Json{{"union", Json::array({trace_to_json(n.left), trace_to_json(n.right)})}}; },
          [](const tr::Comp& n) {
            Json es = Json::array();
            for (const auto& [l, t] : n.elements) es.push_back(Json{{"label", label_to_json(l)}, {"trace", trace_to_json(t)}});
            return Json{{"for", Json{{"var", n.var}, {"body", render_expr(n.body)}, {"source", trace_to_json(n.source)}, {"elements", es}}}};
          },
          [](const tr::Sum& n) { return Json{{"sum", trace_to_json(n.arg)}}; },
          [](const tr::IsEmpty& n) { return Json{{"isempty", trace_to_json(n.arg)}}; },
          [](const tr::Hole&) { return Json{{"hole", true}}; },
      },
      t.node().data);
}

inline Trace trace_from_json(const Json& j) {
  using detail::member;
  using detail::str;
  auto [tag, b] = detail::tagged(j, "trace");
  const Json& body = *b;
  if (tag == "hole") return tr::hole();
  if (tag == "const") {
    Value v = value_from_json(body);
    if (!v.is_constant()) detail::bad_format("\"const\" needs a constant");
    return tr::make(tr::Const{v.as_constant()});
  }
  if (tag == "prim") {
    std::vector<Trace> args;
    for (const auto& a : member(body, "args")) args.push_back(trace_from_json(a));
    PrimOp op = detail::op_from_name(str(member(body, "op"), "operator"));
    if (args.size() != arity(op)) detail::bad_format("wrong number of operator arguments");
    return tr::make(tr::Prim{op, std::move(args)});
  }
  if (tag == "var") return tr::make(tr::Var{str(body, "variable")});
  if (tag == "let")
    return tr::make(tr::Let{str(member(body, "var"), "variable"), trace_from_json(member(body, "bound")),
                            trace_from_json(member(body, "body"))});
  if (tag == "rec") {
    if (!body.is_array()) detail::bad_format("\"rec\" trace needs an array");
    std::vector<std::pair<std::string, Trace>> fs;
    for (const auto& f : body) fs.emplace_back(str(member(f, "field"), "field"), trace_from_json(member(f, "trace")));
    return tr::make(tr::Record{std::move(fs)});
  }
  if (tag == "proj") return tr::make(tr::Field{trace_from_json(member(body, "of")), str(member(body, "field"), "field")});
  if (tag == "if") {
    const Json& taken = member(body, "taken");
    if (!taken.is_boolean()) detail::bad_format("\"taken\" must be a boolean");
    return tr::make(tr::If{trace_from_json(member(body, "test")), detail::expr_from_json(member(body, "then")),
                           detail::expr_from_json(member(body, "else")), taken.get<bool>(),
                           trace_from_json(member(body, "branch"))});
  }
  if (tag == "empty") {
    if (body.is_null()) return tr::make(tr::Empty{std::nullopt});
    return tr::make(tr::Empty{type_from_json(body)});
  }
  if (tag == "sng") return tr::make(tr::Singleton{trace_from_json(body)});
  if (tag == "union") {
    if (!body.is_array() || body.size() != 2) detail::bad_format("\"union\" needs two traces");
    return tr::make(tr::Union{trace_from_json(body[0]), trace_from_json(body[1])});
  }
  if (tag == "for") {
    TraceSet es;
    for (const auto& e : member(body, "elements")) {
      Label l = label_from_json(member(e, "label"));
      if (!es.emplace(l, trace_from_json(member(e, "trace"))).second) detail::bad_format("duplicate label " + to_string(l));
    }
    return tr::make(tr::Comp{detail::expr_from_json(member(body, "body")), str(member(body, "var"), "variable"),
                             trace_from_json(member(body, "source")), std::move(es)});
  }
  if (tag == "sum") return tr::make(tr::Sum{trace_from_json(body)});
  if (tag == "isempty") return tr::make(tr::IsEmpty{trace_from_json(body)});
  detail::bad_format("unknown trace tag \"" + tag + "\"");
}

inline Json env_to_json(const PatternEnv& rho) {
  Json out = Json::object();
  for (const auto& [x, p] : rho) out[x] = render_pattern(p);
  return out;
}

// A named table: row identifiers become single-atom labels.
struct TableFile {
  std::string name;
  Type schema;
  std::vector<std::pair<std::string, Value>> rows;

  Value value() const {
    Elements es;
    for (const auto& [id, v] : rows) es.emplace(Label::of(sym(id)), v);
    return Value::collection(std::move(es));
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
}

// {"name": "R", "schema": <row type>, "rows": [{"id": "r1", "value": <value>}, ...]}
inline TableFile table_from_json(const Json& j) {
  using detail::member;
  TableFile t{detail::str(member(j, "name"), "table name"), type_from_json(member(j, "schema")), {}};
  const Json& rows = member(j, "rows");
  if (!rows.is_array()) detail::bad_format("\"rows\" must be an array");
  std::set<std::string> seen;
  for (const auto& r : rows) {
    std::string id = detail::str(member(r, "id"), "row id");
    if (!is_atom_text(id) || all_digits(id)) detail::bad_format("row id \"" + id + "\" is not a valid string atom");
    if (!seen.insert(id).second) detail::bad_format("duplicate row id \"" + id + "\"");
    Value v = value_from_json(member(r, "value"));
    if (!has_type(v, t.schema))
      throw Error(ErrorCode::SchemaError, "row " + id + " does not match schema " + render_type(t.schema));
    t.rows.emplace_back(std::move(id), std::move(v));
  }
  return t;
}

inline Json table_to_json(const TableFile& t) {
  Json rows = Json::array();
  for (const auto& [id, v] : t.rows) rows.push_back(Json{{"id", id}, {"value", value_to_json(v)}});
  return Json{{"name", t.name}, {"schema", type_to_json(t.schema)}, {"rows", rows}};
}

inline TableFile load_table(const std::string& path) { return table_from_json(parse_json(read_file(path))); }

inline Environment table_environment(const std::vector<TableFile>& tables) {
  Environment env;
  for (const auto& t : tables) env.insert_or_assign(t.name, t.value());
  return env;
}

}  // namespace nrc

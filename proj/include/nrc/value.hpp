#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>

#include "nrc/error.hpp"
#include "nrc/label.hpp"
#include "nrc/type.hpp"

namespace nrc {

using Constant = std::variant<std::int64_t, bool>;

inline Constant int_const(std::int64_t n) { return Constant(std::in_place_index<0>, n); }
inline Constant bool_const(bool b) { return Constant(std::in_place_index<1>, b); }

inline std::string to_string(const Constant& c) {
  if (c.index() == 0) return std::to_string(std::get<0>(c));
  return std::get<1>(c) ? "true" : "false";
}

struct ValueNode;
class Value;

using Fields = std::map<std::string, Value>;
using Elements = std::map<Label, Value>;

// Immutable, structurally shared nested value.
class Value {
 public:
  enum class Kind { Constant, Record, Collection };

  static Value constant(Constant c);
  static Value integer(std::int64_t n) { return constant(int_const(n)); }
  static Value boolean(bool b) { return constant(bool_const(b)); }
  static Value record(Fields fields);
  // Throws PrefixViolation unless the labels form a prefix code.
  static Value collection(Elements elements);
  static Value empty();

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_record() const { return kind() == Kind::Record; }
  bool is_collection() const { return kind() == Kind::Collection; }

  const Constant& as_constant() const;
  const Fields& fields() const;
  const Elements& elements() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  explicit Value(std::shared_ptr<const ValueNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ValueNode> node_;
};

struct ValueNode {
  std::variant<Constant, Fields, Elements> data;
};

inline Value Value::constant(Constant c) { return Value(std::make_shared<const ValueNode>(ValueNode{c})); }
inline Value Value::record(Fields fields) {
  return Value(std::make_shared<const ValueNode>(ValueNode{std::move(fields)}));
}
inline Value Value::collection(Elements elements) {
  if (!is_prefix_code_sorted(elements.begin(), elements.end(),
                             [](const auto& kv) -> const Label& { return kv.first; }))
    throw Error(ErrorCode::PrefixViolation, "collection labels do not form a prefix code");
  return Value(std::make_shared<const ValueNode>(ValueNode{std::move(elements)}));
}
inline Value Value::empty() {
  static const auto n = std::make_shared<const ValueNode>(ValueNode{Elements{}});
  return Value(n);
}

inline Value::Kind Value::kind() const { return static_cast<Kind>(node_->data.index()); }

inline const Constant& Value::as_constant() const {
  if (!is_constant()) throw Error(ErrorCode::TypeStuck, "expected a constant");
  return std::get<0>(node_->data);
}
inline const Fields& Value::fields() const {
  if (!is_record()) throw Error(ErrorCode::TypeStuck, "expected a record");
  return std::get<1>(node_->data);
}
inline const Elements& Value::elements() const {
  if (!is_collection()) throw Error(ErrorCode::TypeStuck, "expected a collection");
  return std::get<2>(node_->data);
}

inline bool operator==(const Value& a, const Value& b) {
  return a.node_ == b.node_ || a.node_->data == b.node_->data;
}

using Environment = std::map<std::string, Value, std::less<>>;

inline bool is_prefix_labeled(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return true;
    case Value::Kind::Record:
      for (const auto& [k, f] : v.fields())
        if (!is_prefix_labeled(f)) return false;
      return true;
    case Value::Kind::Collection: {
      const auto& el = v.elements();
      if (!is_prefix_code_sorted(el.begin(), el.end(), [](const auto& kv) -> const Label& { return kv.first; }))
        return false;
      for (const auto& [k, e] : el)
        if (!is_prefix_labeled(e)) return false;
      return true;
    }
  }
  return false;
}

// l . v : prepend l to every label of a collection.
inline Value prepend_label(const Label& l, const Value& v) {
  if (l.empty()) return v;
  Elements out;
  for (const auto& [k, e] : v.elements()) out.emplace_hint(out.end(), l + k, e);
  return Value::collection(std::move(out));
}

inline Value disjoint_union(const Value& a, const Value& b) {
  Elements out = a.elements();
  for (const auto& [k, e] : b.elements()) {
    if (overlaps_prefix(out, k))
      throw Error(ErrorCode::DomainOverlap, "label " + to_string(k) + " overlaps the other operand");
    out.emplace(k, e);
  }
  return Value::collection(std::move(out));
}

// Type of a value; empty collections get Unknown element type.
inline Type type_of(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return v.as_constant().index() == 0 ? Type::integer() : Type::boolean();
    case Value::Kind::Record: {
      std::map<std::string, Type> fs;
      for (const auto& [k, f] : v.fields()) fs.emplace(k, type_of(f));
      return Type::record(std::move(fs));
    }
    case Value::Kind::Collection: {
      Type t = Type::unknown();
      for (const auto& [k, e] : v.elements()) t = unify(t, type_of(e));
      return Type::set(t);
    }
  }
  return Type::unknown();
}

inline bool has_type(const Value& v, const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unknown: return true;
    case Type::Kind::Int: return v.is_constant() && v.as_constant().index() == 0;
    case Type::Kind::Bool: return v.is_constant() && v.as_constant().index() == 1;
    case Type::Kind::Record: {
      if (!v.is_record()) return false;
      const auto& fs = v.fields();
      const auto& ts = t.fields();
      if (fs.size() != ts.size()) return false;
      for (const auto& [k, ft] : ts) {
        auto it = fs.find(k);
        if (it == fs.end() || !has_type(it->second, ft)) return false;
      }
      return true;
    }
    case Type::Kind::Set: {
      if (!v.is_collection()) return false;
      for (const auto& [k, e] : v.elements())
        if (!has_type(e, t.element())) return false;
      return true;
    }
  }
  return false;
}

}  // namespace nrc

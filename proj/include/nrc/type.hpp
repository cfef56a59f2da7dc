#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "nrc/error.hpp"

namespace nrc {

struct TypeNode;

// Int, Bool, records, collections, and Unknown. Unknown is the element type of
// an unannotated empty collection and the type of a hole; it unifies with any
// type.
class Type {
 public:
  enum class Kind { Int, Bool, Record, Set, Unknown };

  static Type integer();
  static Type boolean();
  static Type unknown();
  static Type record(std::map<std::string, Type> fields);
  static Type set(Type element);

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Int || kind() == Kind::Bool; }
  const std::map<std::string, Type>& fields() const;
  const Type& element() const;

  friend bool operator==(const Type& a, const Type& b);

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct TypeNode {
  Type::Kind kind;
  std::map<std::string, Type> fields;
  std::shared_ptr<const Type> element;
};

inline Type Type::integer() {
  static const auto n = std::make_shared<const TypeNode>(TypeNode{Kind::Int, {}, nullptr});
  return Type(n);
}
inline Type Type::boolean() {
  static const auto n = std::make_shared<const TypeNode>(TypeNode{Kind::Bool, {}, nullptr});
  return Type(n);
}
inline Type Type::unknown() {
  static const auto n = std::make_shared<const TypeNode>(TypeNode{Kind::Unknown, {}, nullptr});
  return Type(n);
}
inline Type Type::record(std::map<std::string, Type> fields) {
  return Type(std::make_shared<const TypeNode>(TypeNode{Kind::Record, std::move(fields), nullptr}));
}
inline Type Type::set(Type element) {
  return Type(std::make_shared<const TypeNode>(TypeNode{Kind::Set, {}, std::make_shared<const Type>(std::move(element))}));
}

inline Type::Kind Type::kind() const { return node_->kind; }
inline const std::map<std::string, Type>& Type::fields() const {
  if (node_->kind != Kind::Record) throw Error(ErrorCode::TypeError, "not a record type");
  return node_->fields;
}
inline const Type& Type::element() const {
  if (node_->kind != Kind::Set) throw Error(ErrorCode::TypeError, "not a collection type");
  return *node_->element;
}

inline bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Record: return a.fields() == b.fields();
    case Type::Kind::Set: return a.element() == b.element();
    default: return true;
  }
}

inline std::string to_string(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Int: return "int";
    case Type::Kind::Bool: return "bool";
    case Type::Kind::Unknown: return "?";
    case Type::Kind::Set: return "{" + to_string(t.element()) + "}";
    case Type::Kind::Record: {
      std::string out = "<";
      bool first = true;
      for (const auto& [k, v] : t.fields()) {
        if (!first) out += ", ";
        first = false;
        out += k + ": " + to_string(v);
      }
      return out + ">";
    }
  }
  return "?";
}

// Most specific common type, treating Unknown as a wildcard.
inline Type unify(const Type& a, const Type& b) {
  if (a.kind() == Type::Kind::Unknown) return b;
  if (b.kind() == Type::Kind::Unknown) return a;
  if (a.kind() != b.kind())
    throw Error(ErrorCode::TypeError, "type mismatch: " + to_string(a) + " vs " + to_string(b));
  switch (a.kind()) {
    case Type::Kind::Set: return Type::set(unify(a.element(), b.element()));
    case Type::Kind::Record: {
      const auto& fa = a.fields();
      const auto& fb = b.fields();
      if (fa.size() != fb.size())
        throw Error(ErrorCode::TypeError, "record type mismatch: " + to_string(a) + " vs " + to_string(b));
      std::map<std::string, Type> out;
      for (const auto& [k, v] : fa) {
        auto it = fb.find(k);
        if (it == fb.end())
          throw Error(ErrorCode::TypeError, "record type mismatch: " + to_string(a) + " vs " + to_string(b));
        out.emplace(k, unify(v, it->second));
      }
      return Type::record(std::move(out));
    }
    default: return a;
  }
}

}  // namespace nrc

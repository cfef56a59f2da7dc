#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>

#include "nrc/value.hpp"

namespace nrc {

// What a record or set pattern says about members it does not list.
enum class Tail { Closed, Hole, Diamond };

struct PatternNode;
class Pattern;

using FieldPatterns = std::map<std::string, Pattern>;
using ElementPatterns = std::map<Label, Pattern>;

// A partial value. Hole relates any two values, Diamond only equal ones.
class Pattern {
 public:
  enum class Kind { Hole, Diamond, Constant, Record, Set };

  static Pattern hole();
  static Pattern diamond();
  static Pattern constant(Constant c);
  static Pattern record(FieldPatterns fields, Tail tail = Tail::Closed);
  // Empty open sets normalise to hole or diamond. Throws PrefixViolation
  // unless the labels form a prefix code.
  static Pattern set(ElementPatterns elements, Tail tail = Tail::Closed);
  // The complete pattern describing exactly v.
  static Pattern of(const Value& v);

  Kind kind() const;
  bool is_hole() const { return kind() == Kind::Hole; }
  bool is_diamond() const { return kind() == Kind::Diamond; }
  bool is_set_shaped() const { return kind() == Kind::Hole || kind() == Kind::Diamond || kind() == Kind::Set; }
  const Constant& as_constant() const;
  const FieldPatterns& fields() const;
  const ElementPatterns& elements() const;
  Tail tail() const;

  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  explicit Pattern(std::shared_ptr<const PatternNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const PatternNode> node_;
};

struct PatternNode {
  struct Record {
    FieldPatterns fields;
    Tail tail;
    bool operator==(const Record&) const = default;
  };
  struct Set {
    ElementPatterns elements;
    Tail tail;
    bool operator==(const Set&) const = default;
  };
  std::variant<std::monostate, std::monostate, Constant, Record, Set> data;
};

inline Pattern Pattern::hole() {
  static const auto n = std::make_shared<const PatternNode>(PatternNode{decltype(PatternNode::data)(std::in_place_index<0>)});
  return Pattern(n);
}
inline Pattern Pattern::diamond() {
  static const auto n = std::make_shared<const PatternNode>(PatternNode{decltype(PatternNode::data)(std::in_place_index<1>)});
  return Pattern(n);
}
inline Pattern Pattern::constant(Constant c) {
  return Pattern(std::make_shared<const PatternNode>(PatternNode{decltype(PatternNode::data)(std::in_place_index<2>, c)}));
}
inline Pattern Pattern::record(FieldPatterns fields, Tail tail) {
  return Pattern(std::make_shared<const PatternNode>(
      PatternNode{decltype(PatternNode::data)(std::in_place_index<3>, PatternNode::Record{std::move(fields), tail})}));
}
inline Pattern Pattern::set(ElementPatterns elements, Tail tail) {
  if (elements.empty() && tail == Tail::Hole) return hole();
  if (elements.empty() && tail == Tail::Diamond) return diamond();
  if (!is_prefix_code_sorted(elements.begin(), elements.end(), [](const auto& kv) -> const Label& { return kv.first; }))
    throw Error(ErrorCode::PrefixViolation, "set pattern labels do not form a prefix code");
  return Pattern(std::make_shared<const PatternNode>(
      PatternNode{decltype(PatternNode::data)(std::in_place_index<4>, PatternNode::Set{std::move(elements), tail})}));
}
inline Pattern Pattern::of(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return constant(v.as_constant());
    case Value::Kind::Record: {
      FieldPatterns fs;
      for (const auto& [k, f] : v.fields()) fs.emplace_hint(fs.end(), k, of(f));
      return record(std::move(fs));
    }
    case Value::Kind::Collection: {
      ElementPatterns es;
      for (const auto& [l, e] : v.elements()) es.emplace_hint(es.end(), l, of(e));
      return set(std::move(es));
    }
  }
  return hole();
}

inline Pattern::Kind Pattern::kind() const { return static_cast<Kind>(node_->data.index()); }
inline const Constant& Pattern::as_constant() const {
  if (kind() != Kind::Constant) throw Error(ErrorCode::ShapeError, "not a constant pattern");
  return std::get<2>(node_->data);
}
inline const FieldPatterns& Pattern::fields() const {
  if (kind() != Kind::Record) throw Error(ErrorCode::ShapeError, "not a record pattern");
  return std::get<3>(node_->data).fields;
}
inline const ElementPatterns& Pattern::elements() const {
  if (kind() != Kind::Set) throw Error(ErrorCode::ShapeError, "not a set pattern");
  return std::get<4>(node_->data).elements;
}
inline Tail Pattern::tail() const {
  if (kind() == Kind::Record) return std::get<3>(node_->data).tail;
  if (kind() == Kind::Set) return std::get<4>(node_->data).tail;
  throw Error(ErrorCode::ShapeError, "pattern has no tail");
}

inline bool operator==(const Pattern& a, const Pattern& b) {
  return a.node_ == b.node_ || a.node_->data == b.node_->data;
}

// Variables absent from the map stand for hole; hole entries are never stored.
using PatternEnv = std::map<std::string, Pattern, std::less<>>;

inline Pattern lookup(const PatternEnv& rho, const std::string& x) {
  auto it = rho.find(x);
  return it == rho.end() ? Pattern::hole() : it->second;
}

// Removes and returns x's pattern.
inline Pattern take(PatternEnv& rho, const std::string& x) {
  auto it = rho.find(x);
  if (it == rho.end()) return Pattern::hole();
  Pattern p = it->second;
  rho.erase(it);
  return p;
}

namespace detail {

// Both sides of a keyed comparison (record fields or set elements): listed
// keys agree, then the tail decides about the rest.
template <class K, class V>
bool rest_equal(const std::map<K, V>& a, const std::map<K, V>& b, const std::map<K, Pattern>& listed) {
  auto ia = a.begin(), ib = b.begin();
  auto skip = [&](auto& it, const auto& end) {
    while (it != end && listed.count(it->first)) ++it;
  };
  while (true) {
    skip(ia, a.end());
    skip(ib, b.end());
    if (ia == a.end() || ib == b.end()) return ia == a.end() && ib == b.end();
    if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
    ++ia;
    ++ib;
  }
}

template <class K, class V>
bool domain_is(const std::map<K, V>& m, const std::map<K, Pattern>& listed) {
  if (m.size() != listed.size()) return false;
  for (const auto& [k, p] : listed)
    if (!m.count(k)) return false;
  return true;
}

}  // namespace detail

// v1 and v2 agree wherever p says they must.
inline bool equiv_at(const Pattern& p, const Value& v1, const Value& v2) {
  switch (p.kind()) {
    case Pattern::Kind::Hole: return true;
    case Pattern::Kind::Diamond: return v1 == v2;
    case Pattern::Kind::Constant:
      return v1.is_constant() && v2.is_constant() && v1.as_constant() == p.as_constant() &&
             v2.as_constant() == p.as_constant();
    case Pattern::Kind::Record: {
      if (!v1.is_record() || !v2.is_record()) return false;
      const auto& f1 = v1.fields();
      const auto& f2 = v2.fields();
      for (const auto& [k, q] : p.fields()) {
        auto a = f1.find(k), b = f2.find(k);
        if (a == f1.end() || b == f2.end() || !equiv_at(q, a->second, b->second)) return false;
      }
      switch (p.tail()) {
        case Tail::Closed: return detail::domain_is(f1, p.fields()) && detail::domain_is(f2, p.fields());
        case Tail::Diamond: return detail::rest_equal(f1, f2, p.fields());
        case Tail::Hole: return true;
      }
      return false;
    }
    case Pattern::Kind::Set: {
      if (!v1.is_collection() || !v2.is_collection()) return false;
      const auto& e1 = v1.elements();
      const auto& e2 = v2.elements();
      for (const auto& [l, q] : p.elements()) {
        auto a = e1.find(l), b = e2.find(l);
        if (a == e1.end() || b == e2.end() || !equiv_at(q, a->second, b->second)) return false;
      }
      switch (p.tail()) {
        case Tail::Closed: return detail::domain_is(e1, p.elements()) && detail::domain_is(e2, p.elements());
        case Tail::Diamond: return detail::rest_equal(e1, e2, p.elements());
        case Tail::Hole: return true;
      }
      return false;
    }
  }
  return false;
}

// v has the shape p describes (p is below the complete pattern of v).
inline bool matches(const Pattern& p, const Value& v) {
  switch (p.kind()) {
    case Pattern::Kind::Hole:
    case Pattern::Kind::Diamond: return true;
    case Pattern::Kind::Constant: return v.is_constant() && v.as_constant() == p.as_constant();
    case Pattern::Kind::Record: {
      if (!v.is_record()) return false;
      for (const auto& [k, q] : p.fields()) {
        auto it = v.fields().find(k);
        if (it == v.fields().end() || !matches(q, it->second)) return false;
      }
      return p.tail() != Tail::Closed || v.fields().size() == p.fields().size();
    }
    case Pattern::Kind::Set: {
      if (!v.is_collection()) return false;
      for (const auto& [l, q] : p.elements()) {
        auto it = v.elements().find(l);
        if (it == v.elements().end() || !matches(q, it->second)) return false;
      }
      return p.tail() != Tail::Closed || v.elements().size() == p.elements().size();
    }
  }
  return false;
}

inline Pattern diamondize(const Pattern& p) {
  auto open = [](Tail t) { return t == Tail::Hole ? Tail::Diamond : t; };
  switch (p.kind()) {
    case Pattern::Kind::Hole:
    case Pattern::Kind::Diamond: return Pattern::diamond();
    case Pattern::Kind::Constant: return p;
    case Pattern::Kind::Record: {
      FieldPatterns fs;
      for (const auto& [k, q] : p.fields()) fs.emplace_hint(fs.end(), k, diamondize(q));
      return Pattern::record(std::move(fs), open(p.tail()));
    }
    case Pattern::Kind::Set: {
      ElementPatterns es;
      for (const auto& [l, q] : p.elements()) es.emplace_hint(es.end(), l, diamondize(q));
      return Pattern::set(std::move(es), open(p.tail()));
    }
  }
  return p;
}

inline Pattern lub(const Pattern& a, const Pattern& b);

namespace detail {

inline Tail meet_tails(Tail a, Tail b) {
  if (a == Tail::Closed || b == Tail::Closed) return Tail::Closed;
  if (a == Tail::Diamond || b == Tail::Diamond) return Tail::Diamond;
  return Tail::Hole;
}

// A key listed on one side only is constrained by the other side's tail.
inline Pattern one_sided(const Pattern& q, Tail other, const std::string& what) {
  switch (other) {
    case Tail::Closed: throw Error(ErrorCode::Incompatible, what + " is excluded by a closed pattern");
    case Tail::Hole: return q;
    case Tail::Diamond: return diamondize(q);
  }
  return q;
}

template <class K>
std::map<K, Pattern> merge_keyed(const std::map<K, Pattern>& a, Tail ta, const std::map<K, Pattern>& b, Tail tb,
                                 std::string (*show)(const K&)) {
  std::map<K, Pattern> out;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.emplace_hint(out.end(), ia->first, one_sided(ia->second, tb, show(ia->first)));
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      out.emplace_hint(out.end(), ib->first, one_sided(ib->second, ta, show(ib->first)));
      ++ib;
    } else {
      out.emplace_hint(out.end(), ia->first, lub(ia->second, ib->second));
      ++ia;
      ++ib;
    }
  }
  return out;
}

inline std::string show_field(const std::string& f) { return "field " + f; }
inline std::string show_label(const Label& l) { return "element " + to_string(l); }

}  // namespace detail

// Least upper bound; throws Incompatible when no pattern refines both.
inline Pattern lub(const Pattern& a, const Pattern& b) {
  if (a == b) return a;
  if (a.is_hole()) return b;
  if (b.is_hole()) return a;
  if (a.is_diamond()) return diamondize(b);
  if (b.is_diamond()) return diamondize(a);
  if (a.kind() != b.kind())
    throw Error(ErrorCode::Incompatible, "patterns of different shape");
  switch (a.kind()) {
    case Pattern::Kind::Constant:
      throw Error(ErrorCode::Incompatible,
                  "different constants " + to_string(a.as_constant()) + " and " + to_string(b.as_constant()));
    case Pattern::Kind::Record:
      return Pattern::record(detail::merge_keyed(a.fields(), a.tail(), b.fields(), b.tail(), &detail::show_field),
                             detail::meet_tails(a.tail(), b.tail()));
    case Pattern::Kind::Set: {
      auto es = detail::merge_keyed(a.elements(), a.tail(), b.elements(), b.tail(), &detail::show_label);
      if (!is_prefix_code_sorted(es.begin(), es.end(), [](const auto& kv) -> const Label& { return kv.first; }))
        throw Error(ErrorCode::Incompatible, "combined labels are not a prefix code");
      return Pattern::set(std::move(es), detail::meet_tails(a.tail(), b.tail()));
    }
    default: break;
  }
  throw Error(ErrorCode::Incompatible, "no common refinement");
}

inline bool leq(const Pattern& a, const Pattern& b) {
  try {
    return lub(a, b) == b;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Incompatible) return false;
    throw;
  }
}

inline PatternEnv lub_env(const PatternEnv& a, const PatternEnv& b) {
  PatternEnv out = a;
  for (const auto& [x, p] : b) {
    auto it = out.find(x);
    if (it == out.end())
      out.emplace(x, p);
    else
      it->second = lub(it->second, p);
  }
  return out;
}

inline void lub_into(PatternEnv& acc, const PatternEnv& more) {
  for (const auto& [x, p] : more) {
    auto it = acc.find(x);
    if (it == acc.end())
      acc.emplace(x, p);
    else
      it->second = lub(it->second, p);
  }
}

inline bool leq_env(const PatternEnv& a, const PatternEnv& b) {
  for (const auto& [x, p] : a)
    if (!leq(p, lookup(b, x))) return false;
  return true;
}

namespace detail {

inline void require_set_shaped(const Pattern& p, const char* op) {
  if (!p.is_set_shaped()) throw Error(ErrorCode::ShapeError, std::string(op) + " needs a set pattern");
}

}  // namespace detail

// Disjoint union of set patterns. Hole and diamond act as empty sets with an
// open tail; a hole tail on either side absorbs.
inline Pattern pattern_union(const Pattern& a, const Pattern& b) {
  detail::require_set_shaped(a, "pattern union");
  detail::require_set_shaped(b, "pattern union");
  static const ElementPatterns none;
  auto elems = [](const Pattern& p) -> const ElementPatterns& { return p.kind() == Pattern::Kind::Set ? p.elements() : none; };
  auto tail = [](const Pattern& p) {
    if (p.is_hole()) return Tail::Hole;
    if (p.is_diamond()) return Tail::Diamond;
    return p.tail();
  };
  ElementPatterns out = elems(a);
  for (const auto& [l, q] : elems(b)) {
    if (overlaps_prefix(out, l))
      throw Error(ErrorCode::DomainOverlap, "label " + to_string(l) + " overlaps the other operand");
    out.emplace(l, q);
  }
  Tail ta = tail(a), tb = tail(b);
  Tail t = (ta == Tail::Hole || tb == Tail::Hole) ? Tail::Hole
           : (ta == Tail::Diamond || tb == Tail::Diamond) ? Tail::Diamond
                                                          : Tail::Closed;
  return Pattern::set(std::move(out), t);
}

// p.eps
inline Pattern singleton_extract(const Pattern& p) {
  detail::require_set_shaped(p, "singleton extraction");
  if (p.is_hole() || p.is_diamond()) return p;
  const auto& es = p.elements();
  if (es.size() != 1 || !es.begin()->first.empty())
    throw Error(ErrorCode::ShapeError, "singleton extraction needs exactly the empty label");
  return es.begin()->second;
}

// p[l]: elements under prefix l with l removed.
inline Pattern label_project(const Pattern& p, const Label& l) {
  detail::require_set_shaped(p, "label projection");
  if (p.is_hole() || p.is_diamond()) return p;
  ElementPatterns out;
  for (auto it = p.elements().lower_bound(l); it != p.elements().end() && l.is_prefix_of(it->first); ++it)
    out.emplace_hint(out.end(), *it->first.strip_prefix(l), it->second);
  return Pattern::set(std::move(out), p.tail());
}

// p|L: elements whose label extends some label of L.
inline Pattern restrict(const Pattern& p, const std::vector<Label>& ls) {
  detail::require_set_shaped(p, "restriction");
  if (p.is_hole() || p.is_diamond()) return p;
  ElementPatterns out;
  for (const auto& l : ls)
    for (auto it = p.elements().lower_bound(l); it != p.elements().end() && l.is_prefix_of(it->first); ++it)
      out.emplace(it->first, it->second);
  return Pattern::set(std::move(out), p.tail());
}

inline Pattern restrict(const Pattern& p, const Label& l) { return restrict(p, std::vector<Label>{l}); }

// p.A
inline Pattern field_project(const Pattern& p, const std::string& field) {
  if (p.is_hole() || p.is_diamond()) return p;
  if (p.kind() != Pattern::Kind::Record) throw Error(ErrorCode::ShapeError, "field projection needs a record pattern");
  auto it = p.fields().find(field);
  if (it != p.fields().end()) return it->second;
  switch (p.tail()) {
    case Tail::Hole: return Pattern::hole();
    case Tail::Diamond: return Pattern::diamond();
    case Tail::Closed: break;
  }
  throw Error(ErrorCode::ShapeError, "closed record pattern has no field " + field);
}

// l . p
inline Pattern prepend_pattern(const Label& l, const Pattern& p) {
  detail::require_set_shaped(p, "label prefixing");
  if (p.is_hole() || p.is_diamond() || l.empty()) return p;
  ElementPatterns out;
  for (const auto& [k, q] : p.elements()) out.emplace_hint(out.end(), l + k, q);
  return Pattern::set(std::move(out), p.tail());
}

// Set pattern with the single element l.p.
inline Pattern element_pattern(const Label& l, const Pattern& p) {
  ElementPatterns es;
  es.emplace(l, p);
  return Pattern::set(std::move(es));
}

// Whether the pattern contains no hole anywhere, including tails.
inline bool is_hole_free(const Pattern& p) {
  switch (p.kind()) {
    case Pattern::Kind::Hole: return false;
    case Pattern::Kind::Diamond:
    case Pattern::Kind::Constant: return true;
    case Pattern::Kind::Record:
      if (p.tail() == Tail::Hole) return false;
      for (const auto& [k, q] : p.fields())
        if (!is_hole_free(q)) return false;
      return true;
    case Pattern::Kind::Set:
      if (p.tail() == Tail::Hole) return false;
      for (const auto& [k, q] : p.elements())
        if (!is_hole_free(q)) return false;
      return true;
  }
  return false;
}

// Replaces each diamond by the corresponding part of v. Used for display:
// the result shows the concrete input values a slice depends on.
inline Pattern fill_diamonds(const Pattern& p, const Value& v) {
  switch (p.kind()) {
    case Pattern::Kind::Hole:
    case Pattern::Kind::Constant: return p;
    case Pattern::Kind::Diamond: return Pattern::of(v);
    case Pattern::Kind::Record: {
      if (!v.is_record()) throw Error(ErrorCode::PatternMismatch, "pattern expects a record");
      FieldPatterns fs;
      for (const auto& [k, q] : p.fields()) {
        auto it = v.fields().find(k);
        if (it == v.fields().end()) throw Error(ErrorCode::PatternMismatch, "value has no field " + k);
        fs.emplace_hint(fs.end(), k, fill_diamonds(q, it->second));
      }
      if (p.tail() == Tail::Diamond)
        for (const auto& [k, f] : v.fields())
          if (!fs.count(k)) fs.emplace(k, Pattern::of(f));
      return Pattern::record(std::move(fs), p.tail() == Tail::Hole ? Tail::Hole : Tail::Closed);
    }
    case Pattern::Kind::Set: {
      if (!v.is_collection()) throw Error(ErrorCode::PatternMismatch, "pattern expects a collection");
      ElementPatterns es;
      for (const auto& [l, q] : p.elements()) {
        auto it = v.elements().find(l);
        if (it == v.elements().end()) throw Error(ErrorCode::PatternMismatch, "value has no element " + to_string(l));
        es.emplace_hint(es.end(), l, fill_diamonds(q, it->second));
      }
      if (p.tail() == Tail::Diamond)
        for (const auto& [l, e] : v.elements())
          if (!es.count(l)) es.emplace(l, Pattern::of(e));
      return Pattern::set(std::move(es), p.tail() == Tail::Hole ? Tail::Hole : Tail::Closed);
    }
  }
  return p;
}

inline PatternEnv fill_diamonds(const PatternEnv& rho, const Environment& env) {
  PatternEnv out;
  for (const auto& [x, p] : rho) {
    auto it = env.find(x);
    out.emplace(x, it == env.end() ? p : fill_diamonds(p, it->second));
  }
  return out;
}

// Lists every member an open tail leaves implicit: hole tails as explicit
// holes, diamond tails as the members' values. The result is closed.
inline Pattern close_tails(const Pattern& p, const Value& v) {
  switch (p.kind()) {
    case Pattern::Kind::Hole:
    case Pattern::Kind::Diamond:
    case Pattern::Kind::Constant: return p;
    case Pattern::Kind::Record: {
      if (!v.is_record()) throw Error(ErrorCode::PatternMismatch, "pattern expects a record");
      FieldPatterns fs;
      for (const auto& [k, f] : v.fields()) {
        auto it = p.fields().find(k);
        if (it != p.fields().end())
          fs.emplace(k, close_tails(it->second, f));
        else if (p.tail() == Tail::Hole)
          fs.emplace(k, Pattern::hole());
        else if (p.tail() == Tail::Diamond)
          fs.emplace(k, Pattern::diamond());
      }
      return Pattern::record(std::move(fs), Tail::Closed);
    }
    case Pattern::Kind::Set: {
      if (!v.is_collection()) throw Error(ErrorCode::PatternMismatch, "pattern expects a collection");
      ElementPatterns es;
      for (const auto& [l, e] : v.elements()) {
        auto it = p.elements().find(l);
        if (it != p.elements().end())
          es.emplace(l, close_tails(it->second, e));
        else if (p.tail() == Tail::Hole)
          es.emplace(l, Pattern::hole());
        else if (p.tail() == Tail::Diamond)
          es.emplace(l, Pattern::diamond());
      }
      return Pattern::set(std::move(es), Tail::Closed);
    }
  }
  return p;
}

}  // namespace nrc
